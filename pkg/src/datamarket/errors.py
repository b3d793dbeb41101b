"""Exception types shared across the package."""


class DataMarketError(Exception):
    """Base class for all errors raised by this package."""


class CatalogError(DataMarketError):
    """Invalid catalog structure or serialization."""


class TableLoadError(DataMarketError):
    """Malformed or inconsistent coalition-accuracy table."""


class SizeLimitError(DataMarketError):
    """Catalog too large for an exhaustive code path."""


class PricingError(DataMarketError):
    """Degenerate pricing inputs (all-zero shares or volumes)."""


class ConfigError(DataMarketError):
    """Invalid experiment configuration."""

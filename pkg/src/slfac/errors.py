class FormatError(ValueError):
    """Raised when a byte buffer does not parse as the expected format."""

class DataError(Exception):
    """Input data is unreadable, malformed beyond recovery, or inconsistent."""

"""Core infrastructure: settings, logging, errors and document IO."""

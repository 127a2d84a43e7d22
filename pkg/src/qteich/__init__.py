"""Classical and quantum Teichmüller theory on fat graphs."""

__version__ = "0.1.0"

import os

def f():
    """Caf� bytes without a declaration."""
    return os.getcwd()

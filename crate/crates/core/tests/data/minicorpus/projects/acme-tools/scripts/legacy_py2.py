import os

def show_env():
    """Print the process environment variables."""
    for k, v in os.environ.items():
        print "%s=%s" % (k, v)

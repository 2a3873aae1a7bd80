import os.path
import random
import secrets
import shutil
import time


def copy_tree(src, dst):
    """Copy a directory tree to a new location, replacing it."""
    if os.path.exists(dst):
        shutil.rmtree(dst)
    shutil.copytree(src, dst)


def sleep_backoff(attempt):
    """Sleep with exponential backoff for a retry attempt."""
    time.sleep(min(60, 2 ** attempt) * random.random())


def random_token(nbytes=16):
    """Generate a random hexadecimal token."""
    return secrets.token_hex(nbytes)

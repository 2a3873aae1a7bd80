import base64
import os.path
import random
import shutil
import time
import urllib.parse


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))


def sleep_backoff(attempt):
    """Sleep with exponential backoff for a retry attempt."""
    time.sleep(min(60, 2 ** attempt) * random.random())


def copy_tree(src, dst):
    """Copy a directory tree to a new location, replacing it."""
    if os.path.exists(dst):
        shutil.rmtree(dst)
    shutil.copytree(src, dst)


def b64_encode(data):
    """Encode bytes as base64 text."""
    return base64.b64encode(data).decode('ascii')

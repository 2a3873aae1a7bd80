import collections
import os.path
import re
import shutil
import urllib.parse


def split_words(text):
    """Split text into lowercase words."""
    return [w.lower() for w in re.findall(r'\w+', text)]


def count_words(text):
    """Count occurrences of each word in a text."""
    return collections.Counter(re.findall(r'\w+', text.lower()))


def copy_tree(src, dst):
    """Copy a directory tree to a new location, replacing it."""
    if os.path.exists(dst):
        shutil.rmtree(dst)
    shutil.copytree(src, dst)


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))

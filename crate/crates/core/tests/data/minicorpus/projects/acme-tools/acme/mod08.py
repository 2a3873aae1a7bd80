import os
import pickle
import urllib.parse


def ensure_dir(path):
    """Create a directory if it does not already exist."""
    if not os.path.isdir(path):
        os.makedirs(path)
    return os.path.abspath(path)


def pickle_save(path, obj):
    """Persist an object with pickle."""
    with open(path, 'wb') as fh:
        pickle.dump(obj, fh)


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)

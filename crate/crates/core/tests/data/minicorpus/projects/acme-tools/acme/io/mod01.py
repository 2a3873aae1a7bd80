import io
import json
import os.path
import pickle
import shutil


def read_json(path):
    """Load a JSON document from the given path.
    
    :param path: file to read
    :returns: the decoded object
    """
    with io.open(path, encoding='utf-8') as fh:
        return json.load(fh)


def copy_tree(src, dst):
    """Copy a directory tree to a new location, replacing it."""
    if os.path.exists(dst):
        shutil.rmtree(dst)
    shutil.copytree(src, dst)


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)


def pickle_save(path, obj):
    """Persist an object with pickle."""
    with open(path, 'wb') as fh:
        pickle.dump(obj, fh)

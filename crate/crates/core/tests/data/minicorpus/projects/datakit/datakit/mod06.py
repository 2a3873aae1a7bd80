import json
import pickle
import re


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)


def split_words(text):
    """Split text into lowercase words."""
    return [w.lower() for w in re.findall(r'\w+', text)]


def dumpIt(x):
    return json.dumps(x)

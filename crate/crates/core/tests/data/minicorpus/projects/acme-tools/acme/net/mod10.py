import collections
import pickle
import re


def count_words(text):
    """Count occurrences of each word in a text."""
    return collections.Counter(re.findall(r'\w+', text.lower()))


def pickle_save(path, obj):
    """Persist an object with pickle."""
    with open(path, 'wb') as fh:
        pickle.dump(obj, fh)

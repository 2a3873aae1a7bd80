import csv
import hashlib
import itertools
import json
import pickle


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)


def write_json(path, obj):
    """Serialize an object as JSON into a file."""
    with open(path, 'w') as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)


def write_csv_rows(path, rows, fields):
    """Write dictionaries to a CSV file with a header row."""
    with open(path, 'w', newline='') as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def chunked(items, size):
    """Split an iterable into tuples of fixed size."""
    it = iter(items)
    return iter(lambda: tuple(itertools.islice(it, size)), ())


def file_digest(path):
    """Compute the sha256 digest of a file in chunks."""
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(65536), b''):
            h.update(chunk)
    return h.hexdigest()

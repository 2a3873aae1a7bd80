import csv
import datetime
import io
import json
import pickle


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)


def parse_date(text):
    """Parse a date string in year-month-day format."""
    return datetime.datetime.strptime(text, '%Y-%m-%d').date()


def read_csv_rows(path):
    """Read all rows of a CSV file as dictionaries."""
    with open(path, newline='') as fh:
        return list(csv.DictReader(fh))


def read_json(path):
    """Load a JSON document from the given path.
    
    :param path: file to read
    :returns: the decoded object
    """
    with io.open(path, encoding='utf-8') as fh:
        return json.load(fh)

import datetime
import random
import time
import urllib.parse
import urllib.request


def sleep_backoff(attempt):
    """Sleep with exponential backoff for a retry attempt."""
    time.sleep(min(60, 2 ** attempt) * random.random())


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))


def fetch_url(url):
    """Download the body of a web page."""
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.read()


def parse_date(text):
    """Parse a date string in year-month-day format."""
    return datetime.datetime.strptime(text, '%Y-%m-%d').date()

import statistics
import urllib.parse
import urllib.request


def mean_and_stdev(values):
    """Compute the mean and standard deviation of values."""
    return statistics.mean(values), statistics.pstdev(values)


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))


def fetch_url(url):
    """Download the body of a web page."""
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.read()

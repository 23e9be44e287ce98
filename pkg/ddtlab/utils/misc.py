"""Miscellaneous utility methods for this repository."""
import os
import csv
import errno


def ensure_dir(path):
    """Ensure that the directory specified exists, and if not, create it."""
    try:
        os.makedirs(path)
    except OSError as exception:
        if exception.errno != errno.EEXIST:
            raise  # pragma: no cover
    return path


def write_csv(file_path, rows, fieldnames):
    """Write a list of dictionaries to a csv file with a header row.

    Floats are written with `repr` so that replaying an experiment produces a
    byte-identical file.

    Parameters
    ----------
    file_path : str
        path to the csv file. Overwritten if it exists.
    rows : list of dict
        one dictionary per row, keyed by the field names
    fieldnames : list of str
        the column order
    """
    with open(file_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fieldnames)
        w.writeheader()
        for row in rows:
            w.writerow({
                key: _format_cell(row.get(key)) for key in fieldnames})


def _format_cell(value):
    """Format a single csv cell."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def print_table(stats):
    """Print a dictionary of statistics as a two-column table.

    Parameters
    ----------
    stats : dict
        the statistics to print, sorted by key
    """
    print("-" * 67)
    for key in sorted(stats.keys()):
        val = stats[key]
        print("| {:<30} | {:<30} |".format(key, str(val)))
    print("-" * 67)
    print('')

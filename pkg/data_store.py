import logging
from os import makedirs, path

from pandas import DataFrame

log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'


class DataStore:
    """Rows of one result table, written as `{prefix}_{kind}.csv`."""

    def __init__(self, columns=None):
        self.reset(columns)

    def __len__(self):
        return len(self.rows)

    def reset(self, columns=None):
        self.columns = list(columns) if columns else None
        self.lastrow = {}
        self.rows = []

    def append(self, row):
        self.lastrow = row
        self.rows.append(row)

    def extend(self, rows):
        for row in rows:
            self.append(row)

    @property
    def data(self) -> DataFrame:
        return DataFrame(self.rows, columns=self.columns)

    def lastval(self, key):
        return self.lastrow[key]

    @staticmethod
    def filename(prefix, kind):
        return "{}_{}.csv".format(prefix, kind)

    def write(self, prefix, kind, frame: DataFrame = None):
        """Write the rows (or frame) and return the file path. Empty tables keep their header."""
        frame = self.data if frame is None else frame
        full_path = self.filename(prefix, kind)
        directory = path.dirname(full_path)
        if directory:
            makedirs(directory, exist_ok=True)
        if not frame.shape[0]:
            log.info("no rows, writing header only")
        log.info("write %d rows to %s", frame.shape[0], path.relpath(full_path))
        frame.to_csv(full_path, index=False, float_format=FLOAT_FORMAT)
        return full_path

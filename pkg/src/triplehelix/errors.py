"""Exception types raised across the package."""


class TripleHelixError(Exception):
    """Base class for every error raised by triplehelix."""


class InvalidDistribution(TripleHelixError, ValueError):
    pass


class InvalidAxes(TripleHelixError, ValueError):
    pass


class InconsistentCounts(TripleHelixError, ValueError):
    """A contingency cell derived from overlapping counts came out negative."""

    def __init__(self, cell, value, year=None):
        self.cell = cell
        self.value = value
        self.year = year
        where = f" (year {year})" if year is not None else ""
        super().__init__(f"cell {cell!r} is negative ({value}){where}")


class EmptyPopulation(TripleHelixError, ValueError):
    def __init__(self, year=None, detail="population is empty"):
        self.year = year
        where = f" (year {year})" if year is not None else ""
        super().__init__(f"{detail}{where}")


class WindowTooLarge(TripleHelixError, ValueError):
    pass


class InvalidWindow(TripleHelixError, ValueError):
    pass


class FormatError(TripleHelixError, ValueError):
    def __init__(self, message, line, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class DuplicateYear(TripleHelixError, ValueError):
    def __init__(self, year, line=None):
        self.year = year
        self.line = line
        where = f" at line {line}" if line is not None else ""
        super().__init__(f"duplicate year {year}{where}")


class UnknownDataset(TripleHelixError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown dataset"


class MissingYear(TripleHelixError, ValueError):
    def __init__(self, identifier):
        self.identifier = identifier
        super().__init__(f"no year for document {identifier!r}")


class InfeasibleSpec(TripleHelixError, ValueError):
    pass


class OutputError(TripleHelixError, OSError):
    pass

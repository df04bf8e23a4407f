"""Exception hierarchy shared across the toolkit."""


class AztextError(Exception):
    """Base class for every error raised by this package."""


class DataError(AztextError):
    """Input data is unusable (exit code 3 territory at the CLI)."""


class MissingFile(AztextError, FileNotFoundError):
    pass


class SchemaError(AztextError):
    pass


class MalformedRow(AztextError):
    def __init__(self, row_number, message):
        super().__init__(f"row {row_number}: {message}")
        self.row_number = row_number


class InvalidPattern(AztextError):
    def __init__(self, index, pattern, reason):
        super().__init__(f"rule {index}: cannot compile {pattern!r}: {reason}")
        self.index = index
        self.pattern = pattern


class UnknownCategory(AztextError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label


class EmptyCorpus(DataError):
    pass


class EmptyDocument(AztextError):
    pass


class EmptyInput(AztextError):
    pass


class DegenerateDataset(DataError):
    pass


class NonFiniteLoss(AztextError):
    pass


class LengthMismatch(AztextError):
    pass


class EmptyMatrix(AztextError):
    pass


class FormatError(AztextError):
    pass


class VersionError(FormatError):
    def __init__(self, found, supported):
        super().__init__(
            f"model file format version {found} is not supported "
            f"(this build reads version {supported})"
        )
        self.found = found
        self.supported = supported


class TruncatedFile(FormatError):
    pass

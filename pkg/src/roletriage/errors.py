"""Exception types shared across the package.

Every error a caller is expected to catch has its own class; generic
ValueError/RuntimeError are reserved for programming mistakes.
"""


class RoleTriageError(Exception):
    """Base class for all package errors."""


# --- corpus ---------------------------------------------------------------

class MissingHeader(RoleTriageError):
    """CSV header row absent or does not match the required schema."""


class EmptyTitle(RoleTriageError):
    def __init__(self, row: int):
        super().__init__(f"row {row}: title is empty after trimming")
        self.row = row


class UnknownRole(RoleTriageError):
    def __init__(self, label: str, row: int | None = None):
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}role label {label!r} matches no mapping entry")
        self.label = label
        self.row = row


class MissingMeta(RoleTriageError):
    def __init__(self, project_id: str):
        super().__init__(f"no metadata entry for project {project_id!r}")
        self.project_id = project_id


class EmptyCorpus(RoleTriageError):
    """Operation requires at least one record."""


class UnknownProject(RoleTriageError):
    def __init__(self, project_id: str):
        super().__init__(f"project {project_id!r} not present in corpus")
        self.project_id = project_id


# --- textprep -------------------------------------------------------------

class EmptyTrainingSet(RoleTriageError):
    """TF-IDF fit called with zero documents."""


class MalformedHeader(RoleTriageError):
    """Embedding file header is not 'count dim'."""


class DimensionMismatch(RoleTriageError):
    """Vector/matrix dimensions are inconsistent with the declared shape."""


# --- models ---------------------------------------------------------------

class LengthMismatch(RoleTriageError):
    """Paired arrays have different lengths."""


class EmptyBatch(RoleTriageError):
    """Training batch contains no samples."""


class SingleClassBatch(RoleTriageError):
    """Operation requires at least two distinct classes in the batch."""


class Divergence(RoleTriageError):
    """Training loss became non-finite."""

    def __init__(self, kind: str, epoch: int, loss: float):
        super().__init__(f"{kind}: loss became {loss!r} at epoch {epoch}")
        self.kind = kind
        self.epoch = epoch
        self.loss = loss


class FeatureKindMismatch(RoleTriageError):
    """Feature family does not match what the model was fit with."""


# --- evaluation -----------------------------------------------------------

class KTooLarge(RoleTriageError):
    """Fold count outside 2 <= K <= n."""


class EmptyInput(RoleTriageError):
    """Metric called on zero samples."""


class EmptyValidation(RoleTriageError):
    """Hold-out evaluation called with an empty validation corpus."""


class NoHistory(RoleTriageError):
    """Training-curve export requested for a model without epoch history."""


# --- recommender ----------------------------------------------------------

class EmptyTitleAfterCleaning(RoleTriageError):
    """Title reduced to nothing by cleaning and stop-word removal."""


class EmptyProjectRoles(RoleTriageError):
    """Recommendation requires a non-empty project role set."""


# --- persistence ----------------------------------------------------------

class VersionMismatch(RoleTriageError):
    def __init__(self, found: int, supported: int):
        super().__init__(
            f"container version {found} not supported (expected {supported})"
        )
        self.found = found
        self.supported = supported


class CorruptContainer(RoleTriageError):
    """Container digest check failed or the file is truncated/garbled."""

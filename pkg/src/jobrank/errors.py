"""Exception types shared across the engine."""


class JobRankError(Exception):
    """Base class for all engine errors."""


class ValidationError(JobRankError):
    """A domain object violated one of its invariants.

    Carries the name of the offending field so callers (and the HTTP layer)
    can produce field-level error messages.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class MissingJobId(ValidationError):
    def __init__(self, message: str = "job_id must be non-empty"):
        super().__init__("job_id", message)


class SalaryBandInverted(ValidationError):
    def __init__(self, salary_min: float, salary_max: float):
        self.salary_min = salary_min
        self.salary_max = salary_max
        super().__init__(
            "salary_min", f"salary_min={salary_min} exceeds salary_max={salary_max}"
        )


class UnknownSkillId(ValidationError):
    def __init__(self, field: str, skills: list[str]):
        self.skills = sorted(skills)
        super().__init__(field, f"unknown skill ids: {', '.join(self.skills)}")


class UnreadableFile(JobRankError):
    pass


class SchemaMismatch(JobRankError):
    pass


class EmptyInput(JobRankError):
    pass


class EmptyQuery(JobRankError):
    pass


class IndexNotFrozen(JobRankError):
    pass


class UnknownSkill(JobRankError):
    pass


class ExternalEmbedderUnavailable(JobRankError):
    pass


class DimensionMismatch(JobRankError):
    pass


class InsufficientCorpus(JobRankError):
    pass


class CorpusFingerprintMismatch(JobRankError):
    pass


class BundleMissing(JobRankError):
    pass


class ExternalGeneratorRejected(JobRankError):
    """External explanation text failed the faithfulness audit."""

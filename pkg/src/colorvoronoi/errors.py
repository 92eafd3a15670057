"""Exception types shared across the package."""


class ColorVoronoiError(Exception):
    """Base class for all package errors."""


class CollinearInput(ColorVoronoiError):
    """Three points that should span a circle are collinear."""


class DegenerateConfiguration(ColorVoronoiError):
    """A ball construction produced a continuous family instead of finitely many balls."""


class MetricMismatch(ColorVoronoiError):
    """An operation was called on a site set with an unsupported metric."""


class GeneralPositionViolation(ColorVoronoiError):
    """The site set violates the general position assumptions."""

    def __init__(self, violations):
        self.violations = list(violations)
        shown = ", ".join(f"{kind} {ids}" for kind, ids in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"general position violated: {shown}{more}")


class InconsistentLabels(ColorVoronoiError):
    """Faces that were merged, or half-edges bounding one face, disagree on their label."""


class ColorLeak(ColorVoronoiError):
    """A boundary site carries a color that belongs to the face's own color set."""


class GeometryMismatch(ColorVoronoiError):
    """Glued pieces of a subdivision do not fit together exactly."""


class CorrespondenceFailure(ColorVoronoiError):
    """No nearest-side unbounded edge matches a farthest-side unbounded edge."""


class SiteFileError(ColorVoronoiError):
    """A site file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")

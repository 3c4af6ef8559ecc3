"""Exception hierarchy for the lfstrata package.

All package-specific failures derive from :class:`LfStrataError` so callers
can catch a single type; each subclass also inherits the closest builtin
(``ValueError``, ``FileNotFoundError``, ...) to stay idiomatic.
"""


class LfStrataError(Exception):
    """Base class for all lfstrata errors."""


class DimensionMismatchError(LfStrataError, ValueError):
    """Companion rasters do not share the same spatial dimensions."""


class UnsupportedFormatError(LfStrataError, ValueError):
    """File is not in a supported/parsable format."""


class NonFiniteValuesError(LfStrataError, ValueError):
    """A loaded map contains NaN or infinite values."""


class MissingViewError(LfStrataError, FileNotFoundError):
    """A view file expected in the light-field directory layout is absent."""

    def __init__(self, view: int, path=None):
        self.view = view
        msg = f"missing view {view}" + (f" ({path})" if path else "")
        super().__init__(msg)


class InvalidLayerCountError(LfStrataError, ValueError):
    """Requested stratification layer count is < 1."""


class LayerOutOfRangeError(LfStrataError, IndexError):
    """Layer index outside {1..L}."""


class EmptyInputError(LfStrataError, ValueError):
    """An operation requiring at least one element received none."""


class ImageTooSmallError(LfStrataError, ValueError):
    """Image has fewer pixels than one requested superpixel."""


class NoKnownLabelsError(LfStrataError, ValueError):
    """Label map is entirely ambiguous (all zeros); nothing to propagate."""


class NoValidPixelsError(LfStrataError, ValueError):
    """Mask marks no pixel as valid; nothing to fill from."""


class EmptyMaskError(LfStrataError, ValueError):
    """Metric mask selects zero pixels."""


class ImageSmallerThanWindowError(LfStrataError, ValueError):
    """Image is smaller than the metric's local window."""


class PatchTooLargeError(LfStrataError, ValueError):
    """Requested patch size exceeds the tensor extent."""


class UnfilledLabelsError(LfStrataError, ValueError):
    """Label map still contains ambiguous (zero) entries where none are allowed."""


class CorruptHeaderError(LfStrataError, ValueError):
    """Tensor file header is malformed or inconsistent with the payload."""

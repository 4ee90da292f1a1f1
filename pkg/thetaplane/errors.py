# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT


class ThetaPlaneError(Exception):
    pass


class SignatureMismatchError(ThetaPlaneError, ValueError):
    pass


# Raised by every text reader; `line` is filled in by the file-level readers
class ElementSyntaxError(ThetaPlaneError, ValueError):

    def __init__(self, message: str, position: int | None = None, line: int | None = None) -> None:
        self.message = message
        self.position = position
        self.line = line
        super().__init__(self._render())


    def _render(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.position is not None:
            where.append(f"position {self.position}")
        if not where:
            return self.message

        return f"{self.message} ({', '.join(where)})"


    def at_line(self, line: int) -> "ElementSyntaxError":
        return type(self)(self.message, self.position, line)


class IndexRangeError(ElementSyntaxError):
    pass


class NotAProjectorError(ThetaPlaneError):
    pass


class DiagonalizationError(ThetaPlaneError):
    pass


class UnitarityCompletionError(ThetaPlaneError):
    def __init__(self, message: str) -> None:
        super().__init__(f"{message}; balanced completion failed and the fallback linear solve is not implemented")


# Two computations of the same identity disagree: an arithmetic bug, not bad input
class IdentityCheckError(ThetaPlaneError, AssertionError):
    pass

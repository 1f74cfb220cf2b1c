"""Exception hierarchy shared by every module of the package."""


class IolatError(Exception):
    """Base class for all errors raised by iolat."""


class ValidationError(IolatError):
    """A poset draft does not describe a finite bounded meet-lattice."""


class CycleDetected(ValidationError):
    def __init__(self, x, y):
        self.x, self.y = x, y
        super().__init__(f"antisymmetry violated: {x} <= {y} and {y} <= {x}")


class NoBottom(ValidationError):
    def __init__(self, candidates=()):
        self.candidates = tuple(candidates)
        super().__init__(f"no unique bottom element (candidates: {list(self.candidates)})")


class NoTop(ValidationError):
    def __init__(self, candidates=()):
        self.candidates = tuple(candidates)
        super().__init__(f"no unique top element (candidates: {list(self.candidates)})")


class NoMeet(ValidationError):
    def __init__(self, a, b):
        self.a, self.b = a, b
        super().__init__(f"no meet for ({a}, {b}): lower bounds have no unique maximum")


class MalformedDraft(ValidationError):
    """Duplicate or ill-formed element names, or covers naming undeclared elements."""


class UnknownElement(IolatError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown element: {self.name!r}"


class LatticeMismatch(IolatError):
    """Objects bound to different lattices were combined."""


class TooManyAtoms(IolatError):
    pass


class OutOfRange(IolatError):
    pass


class TooLarge(IolatError):
    pass


class RetryExhausted(IolatError):
    pass


class NotDerivable(IolatError):
    def __init__(self, body, head):
        self.body, self.head = body, head
        super().__init__(f"({body}, {head}) is not derivable")


class ParseError(IolatError):
    def __init__(self, source, line, cause):
        self.source, self.line, self.cause = source, line, cause
        where = f"{source}:{line}" if line else str(source)
        super().__init__(f"{where}: {cause}")

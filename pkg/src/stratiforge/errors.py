"""Exception types shared across the workbench."""


class StratiforgeError(Exception):
    pass


class SizeCap(StratiforgeError):
    """The requested universe would exceed the configured element cap."""


class DuplicateExtension(StratiforgeError):
    pass


class DanglingReference(StratiforgeError):
    pass


class Unrepresentable(StratiforgeError):
    """A class has no element of the frame whose extension equals it."""


class ParseError(SyntaxError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        super().__init__(f"{msg} at position {pos}")
        self.msg = msg
        self.text = text
        self.pos = pos


class UnknownOperator(StratiforgeError):
    pass


class UnresolvedVariant(StratiforgeError):
    pass


class UnboundVar(StratiforgeError):
    pass


class SchemaError(StratiforgeError):
    pass


class UnknownLemmaField(SchemaError):
    pass

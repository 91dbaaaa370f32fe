# -*- encoding: utf8 -*-

"""
Exceptions raised while reading DTDs, annotation files and graphs.

Every parse-time error carries the 1-based *line* and *column* of the
offending character in the input text.
"""


class DtdError(ValueError):
    """
    Base class for errors located in DTD text.
    """

    def __init__(self, message, line=1, column=1):
        super(DtdError, self).__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return 'line {}, column {}: {}'.format(self.line, self.column,
                                               self.message)

    def relocated(self, line, column, note=None):
        """
        Return a copy of this error pointing at *line*, *column*.

        Used when the error comes from text produced by entity expansion,
        whose own positions mean nothing in the original input.
        """
        message = self.message
        if note:
            message = '{} ({})'.format(message, note)
        error = self.__class__.__new__(self.__class__)
        DtdError.__init__(error, message, line, column)
        for key, value in self.__dict__.items():
            if key not in ('message', 'line', 'column'):
                setattr(error, key, value)
        return error


class TokenizeError(DtdError):
    pass


class UnterminatedComment(TokenizeError):
    pass


class UnterminatedLiteral(TokenizeError):
    pass


class UnterminatedProcessingInstruction(TokenizeError):
    pass


class IllegalCharacter(TokenizeError):
    pass


class DtdSyntaxError(DtdError):
    pass


class MixedSeqAlt(DtdSyntaxError):
    pass


class UnbalancedParen(DtdSyntaxError):
    pass


class EmptyGroup(DtdSyntaxError):
    pass


class TrailingTokens(DtdSyntaxError):
    pass


class InvalidAttributeDefault(DtdSyntaxError):
    pass


class DuplicateElement(DtdError):

    def __init__(self, name, line=1, column=1):
        super(DuplicateElement, self).__init__(
            'element {!r} is declared more than once'.format(name),
            line, column)
        self.name = name


class UndeclaredEntity(DtdError):

    def __init__(self, name, line=1, column=1):
        super(UndeclaredEntity, self).__init__(
            'parameter entity %{}; is not declared'.format(name),
            line, column)
        self.name = name


class RecursiveEntity(DtdError):

    def __init__(self, path, line=1, column=1):
        super(RecursiveEntity, self).__init__(
            'parameter entity refers to itself: {}'.format(
                ' -> '.join('%{};'.format(name) for name in path)),
            line, column)
        self.path = tuple(path)


class AnnotationSyntaxError(ValueError):
    """
    Malformed line in a ref-link annotation file.
    """

    def __init__(self, message, line=1):
        super(AnnotationSyntaxError, self).__init__(message)
        self.message = message
        self.line = line
        self.column = 1

    def __str__(self):
        return 'line {}: {}'.format(self.line, self.message)


class InvalidGraph(ValueError):
    """
    Raised by emitters when the graph fails :func:`validate_graph`.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super(InvalidGraph, self).__init__(
            'invalid schema graph: ' +
            '; '.join(d.message for d in self.diagnostics))


class DotSyntaxError(ValueError):
    """
    DOT text outside the subset accepted by :mod:`dtdgraph.dotcheck`.
    """

    def __init__(self, message, line=1, column=1):
        super(DotSyntaxError, self).__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return 'line {}, column {}: {}'.format(self.line, self.column,
                                               self.message)

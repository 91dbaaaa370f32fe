# -*- encoding: utf8 -*-

"""
Tokenizer and recursive-descent parser for DTD declarations
(internal-subset syntax), with parameter-entity expansion.
"""

import hashlib
import logging
import re
from bisect import bisect_right

from dtdgraph.dtd import (Token, TokenKind, Location, Occurrence, ModelKind,
                          ContentModel, AttributeKind, DefaultKind,
                          AttributeSpec, ElementDecl, AttListDecl,
                          ParamEntityDecl, GeneralEntityDecl, NotationDecl,
                          ParamEntityRef, PendingDecl, DtdAst, PCDATA, EMPTY,
                          ANY)
from dtdgraph.errors import (DtdError, UnterminatedComment,
                             UnterminatedLiteral,
                             UnterminatedProcessingInstruction,
                             IllegalCharacter, DtdSyntaxError, MixedSeqAlt,
                             UnbalancedParen, EmptyGroup, TrailingTokens,
                             InvalidAttributeDefault, DuplicateElement,
                             UndeclaredEntity, RecursiveEntity)

logger = logging.getLogger(__name__)

KEYWORDS = ('ELEMENT', 'ATTLIST', 'ENTITY', 'NOTATION')

_TOKEN_RE = re.compile(r'''
      (?P<space>\s+)
    | (?P<comment><!--)
    | (?P<pi><\?)
    | (?P<markup><!(?:ELEMENT|ATTLIST|ENTITY|NOTATION)(?![\w.:\-\u0300-\u036f]))
    | (?P<literal>["'])
    | (?P<name>[\w.:\-\u00b7\u0300-\u036f\u203f\u2040]+)
    | (?P<punct>[()|,*+?%;#>])
''', re.VERBOSE | re.UNICODE)

_NAME_START_RE = re.compile(r'[^\W\d]|[_:]', re.UNICODE)

_SIMPLE_KINDS = {kind.value: kind for kind in AttributeKind
                 if kind not in (AttributeKind.ENUMERATION,
                                 AttributeKind.NOTATION)}


class _Positions(object):
    """
    Offset to (line, column) conversion for one input text.
    """

    def __init__(self, text):
        self.line_starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def __call__(self, offset):
        line = bisect_right(self.line_starts, offset)
        return line, offset - self.line_starts[line - 1] + 1


def tokenize(text):
    """
    Split DTD *text* into tokens.

    Whitespace is skipped; comments (``<!-- ... -->``) and processing
    instructions (including the XML declaration) come back as single
    tokens. Each token records the line and column of its first character.

    :param text: decoded DTD text
    :rtype: list of :class:`Token`
    """
    position = _Positions(text)
    tokens = list()
    offset = 0
    length = len(text)

    while offset < length:
        match = _TOKEN_RE.match(text, offset)
        if match is None:
            line, column = position(offset)
            if text.startswith('<!', offset):
                message = 'unsupported markup {!r}'.format(
                    text[offset:offset + 9].split()[0])
            else:
                message = 'illegal character {!r}'.format(text[offset])
            raise IllegalCharacter(message, line, column)

        group = match.lastgroup
        if group == 'space':
            offset = match.end()
            continue

        line, column = position(offset)

        if group == 'comment':
            end = text.find('-->', offset + 4)
            if end < 0:
                raise UnterminatedComment('comment is never closed',
                                          line, column)
            kind, end = TokenKind.COMMENT, end + 3
        elif group == 'pi':
            end = text.find('?>', offset + 2)
            if end < 0:
                raise UnterminatedProcessingInstruction(
                    'processing instruction is never closed', line, column)
            kind, end = TokenKind.PI, end + 2
        elif group == 'literal':
            end = text.find(match.group('literal'), offset + 1)
            if end < 0:
                raise UnterminatedLiteral('literal is never closed',
                                          line, column)
            kind, end = TokenKind.LITERAL, end + 1
        elif group == 'markup':
            kind, end = TokenKind.MARKUP_OPEN, match.end()
        elif group == 'name':
            kind, end = TokenKind.NAME, match.end()
        else:
            kind, end = TokenKind.PUNCT, match.end()

        tokens.append(Token(kind, text[offset:end], line, column, offset))
        offset = end

    return tokens


def is_name(text):
    return bool(text) and _NAME_START_RE.match(text) is not None


def _entity_ref_at(tokens, i):
    """
    Return the entity name if ``tokens[i:i + 3]`` spell ``%name;`` with no
    whitespace in between, else None.
    """
    if i + 2 >= len(tokens) or not tokens[i].is_punct('%'):
        return None
    name_token, semicolon = tokens[i + 1], tokens[i + 2]
    if (name_token.kind is TokenKind.NAME and semicolon.is_punct(';') and
            name_token.offset == tokens[i].end and
            semicolon.offset == name_token.end):
        return name_token.lexeme
    return None


# ------------------------------------------------------------------------------
# token cursor


class _Cursor(object):

    def __init__(self, tokens, end_token=None):
        self.tokens = tokens
        self.pos = 0
        self.end_token = end_token

    def peek(self, ahead=0):
        index = self.pos + ahead
        if index < len(self.tokens):
            return self.tokens[index]
        return None

    def next(self):
        token = self.peek()
        if token is not None:
            self.pos += 1
        return token

    def at_end(self):
        return self.pos >= len(self.tokens)

    def at_punct(self, char):
        token = self.peek()
        return token is not None and token.is_punct(char)

    def at_name(self, lexeme=None):
        token = self.peek()
        if token is None or token.kind is not TokenKind.NAME:
            return False
        return lexeme is None or token.lexeme == lexeme

    def where(self, token=None):
        """
        Location of *token*, of the next token, or of the end of input.
        """
        token = token or self.peek() or self.end_token
        if token is None and self.tokens:
            token = self.tokens[-1]
        if token is None:
            return 1, 1
        return token.line, token.column

    def error(self, message, token=None, cls=DtdSyntaxError):
        line, column = self.where(token)
        return cls(message, line, column)

    def describe_next(self):
        token = self.peek()
        if token is None:
            return 'end of declaration'
        return repr(token.lexeme)

    def expect_punct(self, char):
        if not self.at_punct(char):
            raise self.error('expected {!r}, found {}'.format(
                char, self.describe_next()))
        return self.next()

    def expect_name(self, what='name', strict=True):
        token = self.peek()
        if token is None or token.kind is not TokenKind.NAME:
            raise self.error('expected {}, found {}'.format(
                what, self.describe_next()))
        if strict and not is_name(token.lexeme):
            raise self.error('{!r} is not a valid {}'.format(
                token.lexeme, what))
        return self.next()

    def expect_literal(self, what='quoted literal'):
        token = self.peek()
        if token is None or token.kind is not TokenKind.LITERAL:
            raise self.error('expected {}, found {}'.format(
                what, self.describe_next()))
        self.next()
        return token.lexeme[1:-1]

    def entity_ref(self):
        return _entity_ref_at(self.tokens, self.pos)

    def skip_entity_ref(self):
        name = self.entity_ref()
        self.pos += 3
        return name


# ------------------------------------------------------------------------------
# content models


class _ContentModelParser(_Cursor):

    def parse(self):
        token = self.peek()
        if token is None:
            raise self.error('expected a content model, found {}'.format(
                self.describe_next()))

        if self.at_name('EMPTY'):
            self.next()
            model = EMPTY
        elif self.at_name('ANY'):
            self.next()
            model = ANY
        elif self.entity_ref() is not None:
            model = self._external()
        elif self.at_punct('('):
            model = self._group(top=True)
        else:
            raise self.error('expected EMPTY, ANY or "(", found {}'.format(
                self.describe_next()))

        if not self.at_end():
            if self.at_punct(')'):
                raise self.error('unbalanced ")"', cls=UnbalancedParen)
            raise self.error(
                'unexpected {} after the content model'.format(
                    self.describe_next()),
                cls=TrailingTokens)
        return model

    def _occurrence(self):
        token = self.peek()
        if (token is not None and token.kind is TokenKind.PUNCT and
                token.lexeme in '?*+'):
            self.next()
            return Occurrence.from_marker(token.lexeme)
        return Occurrence.ONE

    def _external(self):
        name = self.skip_entity_ref()
        return ContentModel(ModelKind.EXTERNAL, name=name,
                            occurrence=self._occurrence())

    def _particle(self):
        if self.at_punct('('):
            return self._group(top=False)
        if self.entity_ref() is not None:
            return self._external()
        if self.at_punct('#'):
            raise self.error('#PCDATA is only allowed at the start of the '
                             'outermost group')
        token = self.expect_name('element name')
        return ContentModel(ModelKind.NAME, name=token.lexeme,
                            occurrence=self._occurrence())

    def _close(self, opening):
        if self.at_end():
            raise self.error('"(" is never closed', token=opening,
                             cls=UnbalancedParen)
        self.expect_punct(')')

    def _group(self, top):
        opening = self.next()
        if self.at_punct(')'):
            raise self.error('empty group "()"', token=opening,
                             cls=EmptyGroup)
        if self.at_punct('#'):
            if not top:
                raise self.error('#PCDATA is only allowed at the start of '
                                 'the outermost group')
            return self._mixed(opening)

        children = [self._particle()]
        kind = None
        while not self.at_punct(')'):
            token = self.peek()
            if token is None:
                self._close(opening)
            if token.is_punct(',') or token.is_punct('|'):
                this_kind = ModelKind.SEQ if token.lexeme == ',' \
                    else ModelKind.ALT
                if kind is not None and this_kind is not kind:
                    raise self.error(
                        '"," and "|" mixed in one group; add parentheses',
                        cls=MixedSeqAlt)
                kind = this_kind
                self.next()
                if self.at_punct(')'):
                    raise self.error('expected a particle after {!r}'.format(
                        token.lexeme))
                children.append(self._particle())
            else:
                raise self.error('expected ",", "|" or ")", found {}'.format(
                    self.describe_next()))
        self._close(opening)

        return ContentModel(kind or ModelKind.SEQ, children=tuple(children),
                            occurrence=self._occurrence())

    def _mixed(self, opening):
        self.expect_punct('#')
        token = self.expect_name('PCDATA', strict=False)
        if token.lexeme != 'PCDATA':
            raise self.error('expected #PCDATA', token=token)

        children = [PCDATA]
        while self.at_punct('|'):
            self.next()
            if self.entity_ref() is not None:
                children.append(self._external())
            else:
                name_token = self.expect_name('element name')
                children.append(ContentModel(ModelKind.NAME,
                                             name=name_token.lexeme))
        if self.at_punct(','):
            raise self.error('mixed content must use "|", not ","',
                             cls=MixedSeqAlt)
        self._close(opening)

        occurrence = self._occurrence()
        if len(children) == 1 and occurrence is Occurrence.ONE:
            return PCDATA
        if occurrence is not Occurrence.ZERO_OR_MORE:
            raise self.error('mixed content must end with ")*"')
        return ContentModel(ModelKind.ALT, children=tuple(children),
                            occurrence=occurrence)


def parse_content_model(tokens):
    """
    Parse a content model from *tokens* (everything after the element name
    of an ``<!ELEMENT>`` declaration, excluding the closing ``>``).

    Occurrence markers bind to the name or group they immediately follow.

    :rtype: :class:`ContentModel`
    """
    return _ContentModelParser(list(tokens)).parse()


# ------------------------------------------------------------------------------
# declarations


class _DeclarationParser(object):
    """
    Parse a whole DTD text into declarations.

    With *expanding* set, the text is the result of entity substitution:
    leftover ``%name;`` references are unresolved externals and become
    ExternalRef particles instead of deferring the declaration.
    """

    def __init__(self, text, expanding=False, location=None):
        self.text = text
        self.tokens = tokenize(text)
        self.expanding = expanding
        self.location = location

    def _location(self, token):
        if self.location is not None:
            return self.location
        return Location(token.line, token.column)

    def parse(self):
        declarations = list()
        tokens = self.tokens
        i = 0

        while i < len(tokens):
            token = tokens[i]

            if token.kind in (TokenKind.COMMENT, TokenKind.PI):
                i += 1
                continue

            ref = _entity_ref_at(tokens, i)
            if ref is not None:
                declarations.append(ParamEntityRef(ref,
                                                   self._location(token)))
                i += 3
                continue

            if token.kind is not TokenKind.MARKUP_OPEN:
                raise DtdSyntaxError(
                    'expected a declaration, found {!r}'.format(token.lexeme),
                    token.line, token.column)

            end = i + 1
            while end < len(tokens) and not tokens[end].is_punct('>'):
                if tokens[end].kind in (TokenKind.MARKUP_OPEN,
                                        TokenKind.COMMENT, TokenKind.PI):
                    raise DtdSyntaxError(
                        'expected ">" to close {} before {!r}'.format(
                            token.lexeme, tokens[end].lexeme),
                        tokens[end].line, tokens[end].column)
                end += 1
            if end == len(tokens):
                raise DtdSyntaxError(
                    '{} declaration is never closed'.format(token.lexeme),
                    token.line, token.column)

            body = tokens[i + 1:end]
            keyword = token.lexeme[2:]
            location = self._location(token)

            has_refs = any(_entity_ref_at(body, j) is not None
                           for j in range(len(body)))
            cursor = _Cursor(body, end_token=tokens[end])
            method = getattr(self, '_parse_' + keyword.lower())
            if not has_refs or self.expanding:
                declarations.append(method(cursor, location))
            else:
                source = self.text[token.offset:tokens[end].end]
                declarations.append(self._deferred(keyword, cursor, source,
                                                   location))
            i = end + 1

        _check_duplicate_elements(declarations)
        return declarations

    @staticmethod
    def _deferred(keyword, cursor, source, location):
        """
        A declaration using parameter entities. Element declarations whose
        references sit where a particle may stand are parsed right away,
        the references becoming ``EXTERNAL`` particles; anything else waits
        for expansion as a :class:`PendingDecl`.
        """
        if keyword == 'ELEMENT':
            try:
                decl = _DeclarationParser._parse_element(cursor, location)
            except DtdError:
                pass
            else:
                return ElementDecl(decl.name, decl.content, location, source)
        return PendingDecl(keyword, source, location)

    @staticmethod
    def _parse_element(cursor, location):
        name = cursor.expect_name('element name').lexeme
        model_parser = _ContentModelParser(cursor.tokens[cursor.pos:],
                                           end_token=cursor.end_token)
        return ElementDecl(name, model_parser.parse(), location)

    def _parse_attlist(self, cursor, location):
        element = cursor.expect_name('element name').lexeme
        attributes = list()
        while not cursor.at_end():
            if cursor.entity_ref() is not None:
                # unresolved external; already recorded by the expander
                cursor.skip_entity_ref()
                continue
            attributes.append(self._attribute(cursor))
        return AttListDecl(element, tuple(attributes), location)

    @staticmethod
    def _enumerated(cursor, strict):
        cursor.expect_punct('(')
        values = [cursor.expect_name('value', strict=strict).lexeme]
        while cursor.at_punct('|'):
            cursor.next()
            values.append(cursor.expect_name('value', strict=strict).lexeme)
        if cursor.at_end():
            raise cursor.error('"(" is never closed', cls=UnbalancedParen)
        cursor.expect_punct(')')
        return tuple(values)

    def _attribute(self, cursor):
        name_token = cursor.expect_name('attribute name')
        values = ()

        if cursor.at_punct('('):
            kind = AttributeKind.ENUMERATION
            values = self._enumerated(cursor, strict=False)
        else:
            type_token = cursor.expect_name('attribute type', strict=False)
            if type_token.lexeme == 'NOTATION':
                kind = AttributeKind.NOTATION
                values = self._enumerated(cursor, strict=True)
            elif type_token.lexeme in _SIMPLE_KINDS:
                kind = _SIMPLE_KINDS[type_token.lexeme]
            else:
                raise cursor.error('unknown attribute type {!r}'.format(
                    type_token.lexeme), token=type_token)

        value = None
        if cursor.at_punct('#'):
            cursor.next()
            keyword = cursor.expect_name('#REQUIRED, #IMPLIED or #FIXED',
                                         strict=False)
            try:
                default = DefaultKind('#' + keyword.lexeme)
            except ValueError:
                raise cursor.error('unknown default #{}'.format(
                    keyword.lexeme), token=keyword)
            if default is DefaultKind.FIXED:
                value = cursor.expect_literal('fixed value')
        else:
            default_token = cursor.peek()
            value = cursor.expect_literal('default value')
            default = DefaultKind.DEFAULT
            if values and value not in values:
                raise cursor.error(
                    'default {!r} of attribute {!r} is not one of {}'.format(
                        value, name_token.lexeme, '|'.join(values)),
                    token=default_token, cls=InvalidAttributeDefault)

        if default is DefaultKind.FIXED and values and value not in values:
            raise cursor.error(
                'fixed value {!r} of attribute {!r} is not one of {}'.format(
                    value, name_token.lexeme, '|'.join(values)),
                token=name_token, cls=InvalidAttributeDefault)

        return AttributeSpec(name_token.lexeme, kind, default, value, values)

    @staticmethod
    def _external_id(cursor, allow_public_only=False):
        keyword = cursor.expect_name('SYSTEM or PUBLIC', strict=False)
        if keyword.lexeme == 'SYSTEM':
            return cursor.expect_literal('system identifier'), None
        if keyword.lexeme == 'PUBLIC':
            public_id = cursor.expect_literal('public identifier')
            token = cursor.peek()
            if (allow_public_only and
                    (token is None or token.kind is not TokenKind.LITERAL)):
                return None, public_id
            return cursor.expect_literal('system identifier'), public_id
        raise cursor.error('expected SYSTEM or PUBLIC, found {!r}'.format(
            keyword.lexeme), token=keyword)

    def _parse_entity(self, cursor, location):
        parameter = False
        if cursor.at_punct('%'):
            cursor.next()
            parameter = True
        name = cursor.expect_name('entity name').lexeme

        text = system_id = public_id = notation = None
        if cursor.peek() is not None and \
                cursor.peek().kind is TokenKind.LITERAL:
            text = cursor.expect_literal('entity value')
        else:
            system_id, public_id = self._external_id(cursor)
            if not parameter and cursor.at_name('NDATA'):
                cursor.next()
                notation = cursor.expect_name('notation name').lexeme

        if not cursor.at_end():
            raise cursor.error('unexpected {} in entity declaration'.format(
                cursor.describe_next()), cls=TrailingTokens)

        if parameter:
            return ParamEntityDecl(name, text, system_id, public_id, location)
        return GeneralEntityDecl(name, text, system_id, public_id, notation,
                                 location)

    def _parse_notation(self, cursor, location):
        name = cursor.expect_name('notation name').lexeme
        system_id, public_id = self._external_id(cursor,
                                                 allow_public_only=True)
        if not cursor.at_end():
            raise cursor.error('unexpected {} in notation declaration'.format(
                cursor.describe_next()), cls=TrailingTokens)
        return NotationDecl(name, system_id, public_id, location)


def _check_duplicate_elements(declarations):
    seen = set()
    for decl in declarations:
        if isinstance(decl, ElementDecl):
            if decl.name in seen:
                raise DuplicateElement(decl.name, decl.location.line,
                                       decl.location.column)
            seen.add(decl.name)


def digest_text(text):
    return hashlib.sha256(text.encode('utf8')).hexdigest()


def parse_dtd(text, source='<string>'):
    """
    Parse DTD *text* into a :class:`DtdAst`.

    Comments and processing instructions (the XML declaration included)
    are skipped. Declarations that use parameter entities in their bodies
    are kept as :class:`PendingDecl` until
    :func:`expand_parameter_entities` runs.

    :param text: decoded DTD text
    :param source: file name recorded as provenance
    """
    declarations = _DeclarationParser(text).parse()
    logger.debug('%s: parsed %d declarations', source, len(declarations))
    return DtdAst(tuple(declarations), (), source, digest_text(text))


# ------------------------------------------------------------------------------
# parameter entities


class _Expander(object):

    def __init__(self, resolver):
        self.resolver = resolver or dict()
        self.entities = dict()
        self.unresolved = list()
        self.open_import = None  # system id of an unread external subset
        self.output = list()

    def _record(self, name, system_id):
        entry = (name, system_id)
        if entry not in self.unresolved:
            logger.debug('parameter entity %%%s; left unresolved (%s)',
                         name, system_id)
            self.unresolved.append(entry)

    def replacement(self, name, stack, location):
        """
        Fully substituted replacement text of entity *name*, or None when it
        is external and cannot be read.
        """
        if name in stack:
            raise RecursiveEntity(stack + (name,), location.line,
                                  location.column)

        decl = self.entities.get(name)
        if decl is None:
            if self.open_import is not None:
                self._record(name, self.open_import)
                return None
            raise UndeclaredEntity(name, location.line, location.column)

        if not decl.is_external:
            raw = decl.text
        elif decl.system_id in self.resolver:
            logger.debug('reading %%%s; from %s', name, decl.system_id)
            raw = self.resolver[decl.system_id]
        else:
            self._record(name, decl.system_id)
            return None

        return self.substitute(raw, stack + (name,), location)

    def substitute(self, text, stack, location):
        try:
            tokens = tokenize(text)
        except DtdError as error:
            raise error.relocated(location.line, location.column,
                                  'in parameter entity text')

        pieces = list()
        cursor = 0
        i = 0
        while i < len(tokens):
            ref = _entity_ref_at(tokens, i)
            if ref is None:
                i += 1
                continue
            replacement = self.replacement(ref, stack, location)
            if replacement is not None:
                pieces.append(text[cursor:tokens[i].offset])
                pieces.append(' ' + replacement + ' ')
                cursor = tokens[i + 2].end
            i += 3
        pieces.append(text[cursor:])
        return ''.join(pieces)

    def _parse(self, text, location):
        try:
            parser = _DeclarationParser(text, expanding=True,
                                        location=location)
            return parser.parse()
        except DtdError as error:
            raise error.relocated(location.line, location.column,
                                  'in text produced by entity expansion')

    def process(self, declarations, stack=()):
        for decl in declarations:
            if isinstance(decl, ParamEntityDecl):
                # the first declaration of an entity is binding
                self.entities.setdefault(decl.name, decl)
                self.output.append(decl)

            elif isinstance(decl, ParamEntityRef):
                text = self.replacement(decl.name, stack, decl.location)
                if text is None:
                    entity = self.entities.get(decl.name)
                    if entity is not None:
                        self.open_import = entity.system_id
                    continue
                self.process(self._parse(text, decl.location),
                             stack + (decl.name,))

            elif isinstance(decl, PendingDecl):
                text = self.substitute(decl.text, stack, decl.location)
                self.process(self._parse(text, decl.location), stack)

            elif isinstance(decl, ElementDecl) and decl.source is not None:
                text = self.substitute(decl.source, stack, decl.location)
                self.process(self._parse(text, decl.location), stack)

            else:
                self.output.append(decl)


def expand_parameter_entities(ast, resolver=None):
    """
    Expand parameter-entity references in *ast*.

    Internal entities are substituted textually and the affected
    declarations re-parsed in place. External entities are read through
    *resolver*, a mapping of system identifiers to already-loaded text; no
    other I/O happens. External entities that cannot be read are recorded
    in ``unresolved_entities`` and, inside content models, become
    ``EXTERNAL`` particles.

    :raises UndeclaredEntity: a reference to an entity never declared
    :raises RecursiveEntity: an entity whose expansion refers to itself
    """
    expander = _Expander(resolver)
    for entry in ast.unresolved_entities:
        expander.unresolved.append(tuple(entry))
    expander.process(ast.declarations)
    _check_duplicate_elements(expander.output)

    logger.debug('%s: %d declarations after entity expansion, '
                 '%d unresolved entities', ast.source, len(expander.output),
                 len(expander.unresolved))

    return DtdAst(tuple(expander.output), tuple(expander.unresolved),
                  ast.source, ast.digest)

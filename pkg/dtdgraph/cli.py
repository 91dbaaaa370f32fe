# -*- encoding: utf8 -*-

"""
Command-line pipeline: read a DTD, expand its parameter entities, build the
schema graph and write it as DOT or JSON, with diagnostics on stderr.
"""

import argparse
import enum
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

from dtdgraph.release import about
from dtdgraph.annotations import read_annotation_file
from dtdgraph.builder import (BuildOptions, build_graph, collapse,
                              secondary_graph)
from dtdgraph.dot import RenderStyle, emit_dot, emit_legend
from dtdgraph.errors import AnnotationSyntaxError, DtdError
from dtdgraph.graph import (from_json, schema_errors, to_json,
                            validate_graph)
from dtdgraph.parser import expand_parameter_entities, parse_dtd
from dtdgraph.util import (ENCODING, RANKDIRS, STYLE, STYLE_HINTS,
                           has_errors, sort_diagnostics, split_pair,
                           use_color)

logger = logging.getLogger(__name__)

FORMATS = ('dot', 'json', 'legend')

COLOR_OPTIONS = tuple(key for key in STYLE if key.endswith('_fill'))


class ExitCode(enum.IntEnum):
    SUCCESS = 0
    FAILURE = 1  # unreadable input, parse error or invalid graph
    USAGE_ERROR = 2


@dataclass(frozen=True)
class CliConfig:
    input: str = '-'
    output: Optional[str] = None
    format: str = 'dot'
    annotations: Optional[str] = None
    entity_map: Tuple[Tuple[str, str], ...] = ()
    collapse: Tuple[str, ...] = ()
    text_hints: Tuple[Tuple[str, str], ...] = ()
    no_attributes: bool = False
    no_reflinks: bool = False
    propose_links: bool = False
    colors: Tuple[Tuple[str, str], ...] = ()
    rankdir: str = STYLE['rankdir']
    from_json: bool = False
    verbose: bool = False
    encoding: str = ENCODING
    full_enumerations: bool = False
    secondary_dir: Optional[str] = None

    @property
    def source(self):
        return '<stdin>' if self.input == '-' else self.input

    def style(self):
        overrides = dict(self.colors)
        overrides.update(rankdir=self.rankdir,
                         show_attributes=not self.no_attributes,
                         show_reflinks=not self.no_reflinks)
        return RenderStyle.from_overrides(**overrides)

    def build_only_options(self):
        """
        The options set in this configuration that only apply when the
        graph is built from a DTD.
        """
        options = [('--annotations', self.annotations),
                   ('--entity-map', self.entity_map),
                   ('--text-hint', self.text_hints),
                   ('--propose-links', self.propose_links),
                   ('--full-enumerations', self.full_enumerations)]
        return [option for option, value in options if value]

    def build_options(self, annotations):
        # collapsing runs after the build, for JSON input too
        return BuildOptions(tuple(annotations), frozenset(),
                            dict(self.text_hints), self.propose_links,
                            self.full_enumerations)


def _from_json_conflict(config):
    return '{} cannot be used with --from-json'.format(
        ', '.join(config.build_only_options()))


def _pair_type(what):
    def convert(text):
        try:
            return split_pair(text, what)
        except ValueError as error:
            raise argparse.ArgumentTypeError(str(error))
    return convert


def _color_type(text):
    key, value = _pair_type('colour override')(text)
    if key not in COLOR_OPTIONS:
        raise argparse.ArgumentTypeError(
            'unknown colour option {!r} (choose from {})'.format(
                key, ', '.join(COLOR_OPTIONS)))
    return key, value


def make_parser():
    parser = argparse.ArgumentParser(
        prog='dtdgraph',
        description='Draw an XML DTD as a schema graph (DOT or JSON).')
    parser.add_argument('input', nargs='?', default='-',
                        help='DTD file, or - for standard input (default)')
    parser.add_argument('-o', '--output', default=None,
                        help='output file (default: standard output)')
    parser.add_argument('-f', '--format', choices=FORMATS, default='dot',
                        help='output format (default: dot)')
    parser.add_argument('--annotations', metavar='PATH',
                        help='ref-link annotation file '
                             '(element.attribute -> element per line)')
    parser.add_argument('--entity-map', metavar='ID=PATH', action='append',
                        type=_pair_type('entity map entry'), default=[],
                        help='read the external entity with system id ID '
                             'from PATH (repeatable)')
    parser.add_argument('--collapse', metavar='ELEMENT', action='append',
                        default=[],
                        help='draw the content of ELEMENT as a cloud '
                             '(repeatable)')
    parser.add_argument('--text-hint', metavar='ELEMENT=LABEL',
                        action='append', type=_pair_type('text hint'),
                        default=[], dest='text_hints',
                        help='label of the text leaf of ELEMENT '
                             '(repeatable)')
    parser.add_argument('--no-attributes', action='store_true',
                        help=STYLE_HINTS['show_attributes'] + ': off')
    parser.add_argument('--no-reflinks', action='store_true',
                        help=STYLE_HINTS['show_reflinks'] + ': off')
    parser.add_argument('--propose-links', action='store_true',
                        help='report proposed ref-links for IDREF '
                             'attributes')
    parser.add_argument('--full-enumerations', action='store_true',
                        help='list the values of enumerated attributes '
                             '(stars∈{0,1,2} instead of {stars})')
    parser.add_argument('--secondary-dir', metavar='DIR',
                        help='also write the content of each --collapse '
                             'element to DIR/ELEMENT.dot (or .json)')
    parser.add_argument('--color', metavar='OPTION=COLOR', action='append',
                        type=_color_type, default=[], dest='colors',
                        help='override a fill colour; OPTION is one of ' +
                             ', '.join(COLOR_OPTIONS))
    parser.add_argument('--rankdir', choices=RANKDIRS,
                        default=STYLE['rankdir'],
                        help=STYLE_HINTS['rankdir'])
    parser.add_argument('--from-json', action='store_true',
                        help='input is a canonical JSON graph, not a DTD')
    parser.add_argument('--encoding', default=ENCODING,
                        help='encoding of input files (default: utf8)')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log progress on standard error')
    parser.add_argument('--version', action='version',
                        version=about())
    return parser


def parse_args(argv=None):
    """
    :raises SystemExit: with status 2 on a usage error
    """
    parser = make_parser()
    args = parser.parse_args(argv)
    config = CliConfig(input=args.input, output=args.output,
                       format=args.format, annotations=args.annotations,
                       entity_map=tuple(args.entity_map),
                       collapse=tuple(args.collapse),
                       text_hints=tuple(args.text_hints),
                       no_attributes=args.no_attributes,
                       no_reflinks=args.no_reflinks,
                       propose_links=args.propose_links,
                       colors=tuple(args.colors), rankdir=args.rankdir,
                       from_json=args.from_json, verbose=args.verbose,
                       encoding=args.encoding,
                       full_enumerations=args.full_enumerations,
                       secondary_dir=args.secondary_dir)
    if config.from_json and config.build_only_options():
        parser.error(_from_json_conflict(config))
    return config


# ------------------------------------------------------------------------------
# pipeline


class _Failure(Exception):

    def __init__(self, line):
        super(_Failure, self).__init__(line)
        self.line = line


def _read(path, stdin, encoding):
    if path == '-':
        return stdin.read()
    try:
        with open(path, encoding=encoding) as f:
            return f.read()
    except OSError as error:
        raise _Failure('{}: error: cannot open {!r}: {}'.format(
            path, path, error.strerror or error))


def _write_file(path, text):
    if not text.endswith('\n'):
        text += '\n'
    try:
        with open(path, 'w', encoding=ENCODING, newline='\n') as f:
            f.write(text)
    except OSError as error:
        raise _Failure('{}: error: cannot write: {}'.format(
            path, error.strerror or error))


def _write(config, stdout, text):
    if config.output not in (None, '-'):
        _write_file(config.output, text)
    elif text.endswith('\n'):
        stdout.write(text)
    else:
        stdout.write(text + '\n')


def _render(config, g, style):
    if config.format == 'json':
        return to_json(g)
    return emit_dot(g, style)


def _write_secondary_graphs(config, g, style):
    """
    Write the uncollapsed content of each collapse target to its own file
    in ``config.secondary_dir``.
    """
    try:
        os.makedirs(config.secondary_dir, exist_ok=True)
    except OSError as error:
        raise _Failure('{}: error: cannot write: {}'.format(
            config.secondary_dir, error.strerror or error))

    extension = 'json' if config.format == 'json' else 'dot'
    for name in sorted(set(config.collapse)):
        if g.element(name) is None:
            continue  # reported as UnknownCollapseTarget
        path = os.path.join(config.secondary_dir,
                            '{}.{}'.format(name, extension))
        logger.info('secondary graph of %s: %s', name, path)
        _write_file(path, _render(config, secondary_graph(g, name), style))


def _load_graph(config, stdin):
    text = _read(config.input, stdin, config.encoding)
    source = config.source

    if config.from_json:
        try:
            return from_json(text)
        except ValueError as error:
            raise _Failure('{}: error: {}'.format(source, error))

    resolver = {system_id: _read(path, stdin, config.encoding)
                for system_id, path in config.entity_map}
    annotations = list()
    if config.annotations:
        try:
            annotations = read_annotation_file(config.annotations,
                                               config.encoding)
        except OSError as error:
            raise _Failure('{}: error: cannot open {!r}: {}'.format(
                config.annotations, config.annotations,
                error.strerror or error))
        except AnnotationSyntaxError as error:
            raise _Failure('{}:{}: error: AnnotationSyntaxError: {}'.format(
                config.annotations, error.line, error.message))

    try:
        ast = expand_parameter_entities(parse_dtd(text, source), resolver)
    except DtdError as error:
        raise _Failure('{}:{}:{}: error: {}: {}'.format(
            source, error.line, error.column, type(error).__name__,
            error.message))

    return build_graph(ast, config.build_options(annotations))


def _verbose_handler(verbose, stream):
    if not verbose:
        return None
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter('%(name)s: %(message)s'))
    package_logger = logging.getLogger('dtdgraph')
    package_logger.addHandler(handler)
    handler.previous_level = package_logger.level
    package_logger.setLevel(logging.DEBUG)
    return handler


def run(config, stdout=None, stderr=None, stdin=None):
    """
    Run the pipeline described by *config*.

    On success only the emitted DOT or JSON goes to *stdout*; diagnostics,
    sorted by source location, go to *stderr*.

    :return: :class:`ExitCode`
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    color = use_color(stderr)

    try:
        style = config.style()
    except (KeyError, ValueError) as error:
        print('dtdgraph: error: {}'.format(error), file=stderr)
        return ExitCode.USAGE_ERROR
    if config.from_json and config.build_only_options():
        print('dtdgraph: error: ' + _from_json_conflict(config), file=stderr)
        return ExitCode.USAGE_ERROR

    handler = _verbose_handler(config.verbose, stderr)
    try:
        if config.format == 'legend':
            _write(config, stdout, emit_legend(style))
            return ExitCode.SUCCESS

        full = graph = _load_graph(config, stdin)
        if config.collapse and not has_errors(validate_graph(full)):
            graph = collapse(full, config.collapse)
        diagnostics = list(graph.diagnostics) + validate_graph(graph)
        for diagnostic in sort_diagnostics(diagnostics):
            print(diagnostic.format(config.source, color), file=stderr)
        if has_errors(diagnostics):
            return ExitCode.FAILURE

        if config.secondary_dir and config.collapse:
            _write_secondary_graphs(config, full, style)
        _write(config, stdout, _render(config, graph, style))
        return ExitCode.SUCCESS

    except _Failure as failure:
        print(failure.line, file=stderr)
        return ExitCode.FAILURE

    finally:
        if handler is not None:
            package_logger = logging.getLogger('dtdgraph')
            package_logger.removeHandler(handler)
            package_logger.setLevel(handler.previous_level)


def main(argv=None):
    return int(run(parse_args(argv)))


# ------------------------------------------------------------------------------
# dtdgraph-verify


def verify(text, source='<stdin>', stdout=None, stderr=None):
    """
    Check canonical JSON *text* against the format schema and the graph
    invariants; print one line per problem.

    :return: :class:`ExitCode`
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    color = use_color(stderr)

    try:
        data = json.loads(text)
    except ValueError as error:
        print('{}: error: not JSON: {}'.format(source, error), file=stderr)
        return ExitCode.FAILURE

    diagnostics = schema_errors(data)
    if not diagnostics:
        diagnostics = validate_graph(from_json(text))

    for diagnostic in sort_diagnostics(diagnostics):
        print(diagnostic.format(source, color), file=stderr)
    if diagnostics:
        return ExitCode.FAILURE

    print('{}: valid schema graph'.format(source), file=stdout)
    return ExitCode.SUCCESS


def verify_main(argv=None, stdin=None, stdout=None, stderr=None):
    parser = argparse.ArgumentParser(
        prog='dtdgraph-verify',
        description='Check a JSON schema graph written by dtdgraph.')
    parser.add_argument('input', nargs='?', default='-',
                        help='JSON file, or - for standard input (default)')
    args = parser.parse_args(argv)

    stdin = stdin or sys.stdin
    stderr = stderr or sys.stderr
    source = '<stdin>' if args.input == '-' else args.input
    try:
        text = _read(args.input, stdin, ENCODING)
    except _Failure as failure:
        print(failure.line, file=stderr)
        return int(ExitCode.FAILURE)
    return int(verify(text, source, stdout, stderr))

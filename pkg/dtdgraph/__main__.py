#!/usr/bin/env python3
# -*- encoding: utf8 -*-

import sys

from dtdgraph.cli import main as cli_main


def main(argv=None):
    return cli_main(argv)


if __name__ == '__main__':
    sys.exit(main())

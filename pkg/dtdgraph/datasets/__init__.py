# -*- encoding: utf8 -*-

import os

amv = os.path.join(os.path.dirname(__file__), 'amv.dtd')
amv_links = os.path.join(os.path.dirname(__file__), 'amv.links')

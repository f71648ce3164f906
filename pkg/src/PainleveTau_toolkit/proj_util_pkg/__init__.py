# -*- coding: utf-8 -*-
"""
專案工具包模組
"""

"""File formats, report formatting, figures and random inputs"""

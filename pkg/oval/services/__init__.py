"""Computation services"""

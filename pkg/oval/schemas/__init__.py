"""Pydantic schemas for the geometric objects and reports"""

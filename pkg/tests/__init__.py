"""Test suite for Vaccination Locker Backend"""


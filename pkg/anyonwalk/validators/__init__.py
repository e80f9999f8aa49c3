"""
anyonwalk Validators

- TableCheck: closed-form moment table against the bracket state sum
"""

from .table_check import TableCheckReport, TableCheckRow, verify_table

__all__ = ["TableCheckReport", "TableCheckRow", "verify_table"]

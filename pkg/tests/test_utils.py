import os
import threading
import unittest
from unittest.mock import patch

from weft.utils import THREADS_ENV_VAR, resolve_workers, row_blocks, run_row_blocks


class TestWorkers(unittest.TestCase):

    def test_explicit_count(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(resolve_workers(3), 3)
            self.assertEqual(resolve_workers(0), 1)

    def test_environment_cap(self):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "2"}):
            self.assertEqual(resolve_workers(8), 2)
            self.assertEqual(resolve_workers(1), 1)

    def test_bad_environment_value_is_ignored(self):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "many"}):
            with self.assertLogs('weft.utils', level='WARNING'):
                self.assertEqual(resolve_workers(4), 4)

    def test_row_blocks_cover_rows_in_order(self):
        blocks = row_blocks(10, 3)
        self.assertEqual([list(b) for b in blocks], [[0, 1, 2], [3, 4, 5], [6, 7, 8, 9]])
        self.assertEqual(len(row_blocks(3, 8)), 3)
        self.assertEqual(row_blocks(5, 1), [range(0, 5)])

    def test_run_row_blocks_preserves_order(self):
        with patch.dict(os.environ, {}, clear=True):
            results = run_row_blocks(lambda rows: list(rows), 9, workers=4)
        self.assertEqual([row for block in results for row in block], list(range(9)))

    def test_single_block_runs_inline(self):
        caller = threading.get_ident()
        seen = run_row_blocks(lambda rows: threading.get_ident(), 16, workers=1)
        self.assertEqual(seen, [caller])


if __name__ == '__main__':
    unittest.main()

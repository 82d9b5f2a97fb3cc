import os
import struct
import tempfile
import unittest

import numpy as np

from pyrepsim.exceptions import MatrixIOError, ParseError, ValidationError
from pyrepsim.util import matrix_io


class TestRsmBinary(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "layer.rsm")

    def tearDown(self):
        self.tmp.cleanup()

    def test_write_then_read_is_exact(self):
        data = np.random.RandomState(1).randn(5, 3) * 1e-7
        matrix_io.write_rsm(self.path, data)
        read = matrix_io.read_rsm(self.path)

        assert read.dtype == np.float64
        assert read.shape == (5, 3)
        np.testing.assert_array_equal(read, data)

    def test_layout(self):
        matrix_io.write_rsm(self.path, np.array([[1., 2.]]))
        with open(self.path, "rb") as fh:
            raw = fh.read()

        assert raw[:4] == b"RSM1"
        assert struct.unpack("<QQ", raw[4:20]) == (1, 2)
        assert struct.unpack("<2d", raw[20:]) == (1., 2.)

    def test_bad_magic(self):
        with open(self.path, "wb") as fh:
            fh.write(struct.pack("<4sQQ", b"NOPE", 1, 1) + struct.pack("<d", 1.))

        with self.assertRaises(ParseError) as ctx:
            matrix_io.read_rsm(self.path)
        assert ctx.exception.offset == 0

    def test_truncated_payload(self):
        with open(self.path, "wb") as fh:
            fh.write(struct.pack("<4sQQ", b"RSM1", 2, 2) + struct.pack("<3d", 1., 2., 3.))

        with self.assertRaises(ParseError) as ctx:
            matrix_io.read_rsm(self.path)
        assert ctx.exception.offset == 20 + 24
        assert "needs 52 bytes" in str(ctx.exception)

    def test_short_header(self):
        with open(self.path, "wb") as fh:
            fh.write(b"RSM1")

        self.assertRaises(ParseError, matrix_io.read_rsm, self.path)

    def test_missing_file(self):
        with self.assertRaises(MatrixIOError):
            matrix_io.read_rsm(os.path.join(self.tmp.name, "missing.rsm"))


class TestCsv(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "layer.csv")

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, text):
        with open(self.path, "w") as fh:
            fh.write(text)

    def test_header_is_skipped(self):
        self._write("a,b\n1,2\n3,4\n")
        np.testing.assert_array_equal(matrix_io.read_csv(self.path), [[1., 2.], [3., 4.]])

    def test_full_precision(self):
        data = np.random.RandomState(2).randn(4, 2)
        matrix_io.write_csv(self.path, data)
        np.testing.assert_array_equal(matrix_io.read_csv(self.path), data)

    def test_non_numeric_line(self):
        self._write("1,2\n3,x\n")
        with self.assertRaises(ParseError) as ctx:
            matrix_io.read_csv(self.path)
        assert ctx.exception.line == 2
        assert "(line 2)" in str(ctx.exception)

    def test_ragged_rows(self):
        self._write("1,2\n3,4,5\n")
        with self.assertRaises(ParseError) as ctx:
            matrix_io.read_csv(self.path)
        assert ctx.exception.line == 2

    def test_empty_file(self):
        self._write("")
        self.assertRaises(ParseError, matrix_io.read_csv, self.path)


class TestGuessFormat(unittest.TestCase):

    def test_extensions(self):
        assert matrix_io.guess_format("a/b.csv") == "csv"
        assert matrix_io.guess_format("a/b.RSM") == "rsm-binary"
        assert matrix_io.guess_format("b.bin") == "rsm-binary"

    def test_unknown_extension(self):
        self.assertRaises(ValidationError, matrix_io.guess_format, "b.npy")


if __name__ == "__main__":
    unittest.main()

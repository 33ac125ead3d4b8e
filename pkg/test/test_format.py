import utils
import os
import unittest
import math
from io import StringIO
import numpy as np

TOPDIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
utils.set_search_paths(TOPDIR)
import credalvol
import credalvol.format


class Tests(unittest.TestCase):
    def test_read_credal_set(self):
        """Test read_credal_set()"""
        with open(utils.get_input_file_name(TOPDIR, 'simplex3.json')) as fh:
            p = credalvol.format.read_credal_set(fh)
        self.assertEqual(p.d, 3)
        self.assertEqual(len(p.vertices), 3)
        with open(utils.get_input_file_name(TOPDIR, 'interval2.json')) as fh:
            p = credalvol.format.read_credal_set(fh)
        np.testing.assert_allclose(p.vertex_array, [[0.2, 0.8], [0.6, 0.4]])

    def test_read_credal_set_malformed(self):
        """Malformed JSON gives a format error"""
        with open(utils.get_input_file_name(TOPDIR, 'malformed.json')) as fh:
            self.assertRaises(credalvol.format.CredalFormatError,
                              credalvol.format.read_credal_set, fh)

    def test_read_credal_set_invalid(self):
        """Structurally invalid credal sets are rejected"""
        for text in ('[1, 2]', '{"d": 2}', '{"vertices": [[0.5, 0.5]]}',
                     '{"d": 1, "vertices": [[1.0]]}',
                     '{"d": 2.5, "vertices": [[0.5, 0.5]]}',
                     '{"d": true, "vertices": [[0.5, 0.5]]}',
                     '{"d": 2, "vertices": []}',
                     '{"d": 2, "vertices": [[0.5, 0.25, 0.25]]}',
                     '{"d": 2, "vertices": [[0.5, "x"]]}',
                     '{"d": 2, "vertices": [0.5]}'):
            self.assertRaises(credalvol.format.CredalFormatError,
                              credalvol.format.read_credal_set,
                              StringIO(text))
        # Not in the simplex
        with open(utils.get_input_file_name(TOPDIR,
                                            'not_simplex.json')) as fh:
            self.assertRaises(credalvol.InvalidProbabilityVectorError,
                              credalvol.format.read_credal_set, fh)

    def test_write_credal_set(self):
        """Test write_credal_set()"""
        p = credalvol.make_credal_polytope([[0.6, 0.4], [0.2, 0.8],
                                            [0.4, 0.6]])
        fh = StringIO()
        credalvol.format.write_credal_set(p, fh)
        self.assertEqual(fh.getvalue(),
                         '{"d": 2, "vertices": [[0.20000000000000001, '
                         '0.80000000000000004], [0.59999999999999998, '
                         '0.40000000000000002]]}\n')
        fh.seek(0)
        q = credalvol.format.read_credal_set(fh)
        np.testing.assert_array_equal(q.vertex_array, p.vertex_array)

    def test_read_grouping(self):
        """Test read_grouping()"""
        with open(utils.get_input_file_name(TOPDIR, 'diagonal.json')) as fh:
            g = credalvol.format.read_grouping(fh)
        self.assertEqual((g.d1, g.d2), (2, 2))
        self.assertEqual(g.factor_map, ((0, 0), (1, 1)))
        for text in ('{"d1": 2, "d2": 2}', '[]',
                     '{"d1": 2, "d2": 2, "map": [[0, 0, 1]]}',
                     '{"d1": 2, "d2": 2, "map": [[0.5, 0]]}', '{'):
            self.assertRaises(credalvol.format.CredalFormatError,
                              credalvol.format.read_grouping,
                              StringIO(text))

    def test_credal_set_file(self):
        """Test read_credal_set_file() and write_credal_set_file()"""
        p = credalvol.vacuous(3)
        with utils.temporary_directory() as tmpdir:
            fname = os.path.join(tmpdir, 'out.json')
            credalvol.format.write_credal_set_file(p, fname)
            q = credalvol.format.read_credal_set_file(fname)
        np.testing.assert_array_equal(q.vertex_array, p.vertex_array)
        self.assertTrue(credalvol.format._is_binary('foo.MSGPACK'))
        self.assertFalse(credalvol.format._is_binary('foo.json'))

    def test_json_writer(self):
        """Test JsonWriter class"""
        fh = StringIO()
        w = credalvol.format.JsonWriter(fh)
        w.write({'b': [1, 2.5, None], 'a': True, 'c': 'x"y'})
        self.assertEqual(fh.getvalue(),
                         '{"a": true, "b": [1, 2.5, null], "c": "x\\"y"}\n')

    def test_repr(self):
        """Test JsonWriter._repr()"""
        d = credalvol.format.dumps
        self.assertEqual(d(0.1), '0.10000000000000001')
        self.assertEqual(d(float('inf')), 'null')
        self.assertEqual(d(math.nan), 'null')
        self.assertEqual(d(False), 'false')
        self.assertEqual(d(np.float64(0.5)), '0.5')
        self.assertEqual(d(np.int64(3)), '3')
        self.assertEqual(d(np.array([[1., 2.]])), '[[1, 2]]')
        self.assertEqual(d((1, 'a')), '[1, "a"]')
        self.assertEqual(d({2: 'x', 1: 'y'}), '{"1": "y", "2": "x"}')
        self.assertRaises(TypeError, d, object())

    def test_dumps_deterministic(self):
        """Identical data gives identical text"""
        a = {'x': [0.1 + 0.2, 1. / 3.], 'y': {'z': 1e-300}}
        b = {'y': {'z': 1e-300}, 'x': [0.1 + 0.2, 1. / 3.]}
        self.assertEqual(credalvol.format.dumps(a),
                         credalvol.format.dumps(b))

    def test_csv_writer(self):
        """Test CsvWriter class"""
        fh = StringIO()
        w = credalvol.format.CsvWriter(fh, ['n', 'value', 'ok', 'note'],
                                       comment='config {"seed": 0}')
        w.write({'n': 1, 'value': 0.25, 'ok': True, 'note': 'a,b'})
        w.write({'n': np.int64(2), 'value': np.float64(0.1), 'ok': False})
        self.assertEqual(fh.getvalue(),
                         '# config {"seed": 0}\n'
                         'n,value,ok,note\n'
                         '1,0.25,true,"a,b"\n'
                         '2,0.10000000000000001,false,\n')

    def test_csv_writer_no_comment(self):
        """CsvWriter without a comment starts with the header"""
        fh = StringIO()
        credalvol.format.CsvWriter(fh, ['a', 'b'])
        self.assertEqual(fh.getvalue(), 'a,b\n')


if __name__ == '__main__':
    unittest.main()

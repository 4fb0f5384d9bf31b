"""
Test script for components module and the report frames behind it.
Builds every figure from fixtures to verify the Plotly functions work.

Usage:
    python3 test_components.py
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from formats import load_category, parse_file
from hochschild import e1_length, hh
from morse import degree_table
from reports import config_frame, degree_frame, e1_frame, euler_form, hom_frame, hom_matrix, morse_degree_frame
from utils import fixture_path, list_fixtures
from components import (
    create_hom_heatmap,
    create_degree_bar,
    create_e1_heatmap,
    create_sphere_chart,
    create_verdict_table,
    get_category_kpis
)


def test_frames():
    print("\n1. Building report frames...")
    c = load_category(fixture_path('cp2.qcat'))
    frame = hom_frame(c)
    assert list(frame.columns) == ['source', 'target', 'degree', 'dim']
    assert len(frame) == 3
    matrix = hom_matrix(c)
    assert matrix.loc['X1', 'X3'] == 2
    assert matrix.loc['X3', 'X1'] == 0
    assert euler_form(c).loc['X1', 'X2'] == 2
    assert list(degree_frame({}).columns) == ['degree', 'dim']
    print(f"   ✓ Frames ready: {len(frame)} Hom rows")
    print("\n   Preview:")
    print(matrix.to_string())


def test_heatmaps():
    print("\n2. Creating heatmaps...")
    c = load_category(fixture_path('cp2.qcat'))
    fig = create_hom_heatmap(hom_matrix(c), 'Morphisms')
    assert len(fig.data) == 1
    assert list(fig.data[0].x) == ['X1', 'X2', 'X3']
    fig = create_e1_heatmap(e1_frame(e1_length(c)), 'E1')
    assert len(fig.data) == 1
    empty = create_e1_heatmap(e1_frame({}), 'E1')
    assert len(empty.data) == 0
    assert empty.layout.annotations[0].text == "No length filtration pieces"
    print("   ✓ Heatmaps created, empty input falls back to a message")


def test_degree_bar():
    print("\n3. Creating degree bars...")
    fig = create_degree_bar(hh(load_category(fixture_path('cp2.qcat'))), 'HH')
    assert len(fig.data) == 1
    assert list(fig.data[0].x) == ['0', '1', '2']
    assert list(fig.data[0].y) == [1, 4, 2]
    assert len(create_degree_bar({}, 'HH').data) == 0
    print("   ✓ One bar per degree")


def test_sphere_chart():
    print("\n4. Creating configuration chart...")
    cfg = parse_file(fixture_path('makebasis.zconf'))
    fig = create_sphere_chart(cfg, 'Spheres')
    assert len(fig.data) == len(cfg)
    frame = config_frame(cfg)
    assert list(frame['sphere'])[:2] == ['L1', 'L2']
    print(f"   ✓ Chart created with {len(fig.data)} traces")


def test_morse_frame():
    print("\n5. Creating Morse degree pivot...")
    pivot = morse_degree_frame(degree_table(parse_file(fixture_path('s2.flow'))))
    assert list(pivot.index) == ['min->max']
    assert list(pivot.columns) == [-1, 0]
    assert morse_degree_frame({}).empty
    print("   ✓ Pairs against degrees")


def test_tables_and_kpis():
    print("\n6. Verdict table and KPIs...")
    table = create_verdict_table({'relations': True, 'HH invariant': False})
    assert list(table['result']) == ['yes', 'no']
    kpis = get_category_kpis(load_category(fixture_path('a2.qcat')))
    assert [k['label'] for k in kpis] == ['Objects', 'Morphisms', 'Max arity', 'Grading']
    assert kpis[0]['value'] == '2'
    assert 'cp2.qcat' in list_fixtures('.qcat')
    print("   ✓ Tables and KPI cards built")


TESTS = [
    test_frames,
    test_heatmaps,
    test_degree_bar,
    test_sphere_chart,
    test_morse_frame,
    test_tables_and_kpis,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING COMPONENTS MODULE")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL COMPONENT TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)

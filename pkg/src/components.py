import plotly.graph_objects as go
import pandas as pd

VERDICT_COLORS = {
    'yes': '#2ecc71',       # Green
    'no': '#e74c3c',        # Red
    'skipped': '#95a5a6'    # Gray
}

# Heatmap styling
HEATMAP_SCALE = 'Blues'
DEGREE_COLOR = '#3498db'
SPHERE_COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b', '#e377c2', '#7f7f7f']


def _empty_figure(message, height=400):
    fig = go.Figure()
    fig.add_annotation(
        text=message,
        xref="paper", yref="paper",
        x=0.5, y=0.5, showarrow=False,
        font=dict(size=14)
    )
    fig.update_layout(height=height)
    return fig


def create_hom_heatmap(frame, title):
    """Object by object heatmap of a square frame such as reports.hom_matrix or reports.euler_form."""
    if frame is None or frame.empty:
        return _empty_figure("No objects to compare")

    fig = go.Figure(data=go.Heatmap(
        z=frame.values,
        x=list(frame.columns),
        y=list(frame.index),
        colorscale=HEATMAP_SCALE,
        text=frame.values,
        texttemplate='%{text}',
        hovertemplate='Hom(%{y}, %{x}) = %{z}<extra></extra>'
    ))

    fig.update_layout(
        title=title,
        xaxis_title="Target",
        yaxis_title="Source",
        yaxis={'autorange': 'reversed'},
        height=max(400, 60 * len(frame.index)),
    )

    return fig


def create_degree_bar(table, title, value_label='Dimension'):

    # Degree-keyed table, e.g. HH or End
    if not table:
        return _empty_figure("Nothing in any degree")

    frame = pd.DataFrame(sorted(table.items()), columns=['degree', 'dim'])

    fig = go.Figure(data=[
        go.Bar(
            x=frame['degree'].astype(str),
            y=frame['dim'],
            marker_color=DEGREE_COLOR,
            text=frame['dim'],
            textposition='auto',
            hovertemplate='degree %{x}: %{y}<extra></extra>'
        )
    ])

    fig.update_layout(
        title=title,
        xaxis_title="Degree",
        yaxis_title=value_label,
        height=400,
        showlegend=False
    )

    return fig


def create_e1_heatmap(pivot, title):
    """Length by degree pivot from reports.e1_frame."""
    if pivot is None or pivot.empty:
        return _empty_figure("No length filtration pieces")

    fig = go.Figure(data=go.Heatmap(
        z=pivot.values,
        x=[str(c) for c in pivot.columns],
        y=[str(i) for i in pivot.index],
        colorscale=HEATMAP_SCALE,
        text=pivot.values,
        texttemplate='%{text}',
        hovertemplate='length %{y}, degree %{x}: %{z}<extra></extra>'
    ))

    fig.update_layout(
        title=title,
        xaxis_title="Degree",
        yaxis_title="Length",
        height=400
    )

    return fig


def create_sphere_chart(cfg, title):
    """Each zero-sphere drawn as a segment between its two points, spheres left to right."""
    if cfg is None or not len(cfg):
        return _empty_figure("Configuration has no spheres")

    fig = go.Figure()

    for n, s in enumerate(cfg.spheres):
        a, b = s.points
        fig.add_trace(go.Scatter(
            x=[n + 1, n + 1],
            y=[a, b],
            mode='lines+markers+text',
            line=dict(color=SPHERE_COLORS[n % len(SPHERE_COLORS)], width=3),
            marker=dict(size=10),
            text=[str(s.grading[0]), str(s.grading[1])],
            textposition='middle right',
            name=f"L{n + 1}",
            hovertemplate=f"L{n + 1}: {{{a},{b}}} grading {s.grading[0]} {s.grading[1]}<extra></extra>"
        ))

    fig.update_layout(
        title=title,
        xaxis_title="Sphere",
        yaxis_title="Fibre point",
        xaxis=dict(dtick=1),
        yaxis=dict(dtick=1, range=[0.5, cfg.fibre + 0.5]),
        height=400,
        showlegend=False
    )

    return fig


def create_verdict_table(verdicts):
    # name -> bool, shown as a two column frame
    rows = [{'check': name, 'result': 'yes' if ok else 'no'} for name, ok in verdicts.items()]
    return pd.DataFrame(rows, columns=['check', 'result'])


def style_verdicts(df):
    return df.style.map(lambda v: f"color: {VERDICT_COLORS.get(v, 'black')}; font-weight: bold",
                        subset=['result'])


def format_kpi(label, value, unit=''):

    return {
        'label': label,
        'value': f"{value:.2f}{unit}" if isinstance(value, float) else f"{value}{unit}"
    }


def get_category_kpis(c):

    kpis = [
        format_kpi('Objects', c.m),
        format_kpi('Morphisms', sum(s.dim for s in c.homs.values())),
        format_kpi('Max arity', c.max_arity),
        format_kpi('Grading', c.grading.value)
    ]

    return kpis

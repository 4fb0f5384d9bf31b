import streamlit as st

from components import create_hom_heatmap, create_sphere_chart, create_verdict_table, style_verdicts
from reports import config_frame, hom_matrix
from formats import parse_file
from zerodim import cone_triangle_check, cover_topology, fukaya, orbit_search, triangle_sweep
from utils import fixture_path, list_fixtures


def show(cfg, name):
    st.markdown('<div id="top"></div>', unsafe_allow_html=True)

    st.header(f"⚪ Zero-dimensional configuration: {name}")

    st.info("""
    **How to read this page:**
    - Each vertical segment is a zero-sphere; labels are the gradings of its two points
    - The heatmap is the directed Fukaya category of the spheres in order
    - The branched double cover is read off the product of the transpositions
    """)

    report = cover_topology(cfg)

    col1, col2, col3, col4 = st.columns(4)

    col1.metric("Fibre points", cfg.fibre)
    col2.metric("Spheres", len(cfg))
    col3.metric("Euler characteristic", report.euler_characteristic)
    col4.metric("Boundary circles", report.boundary_circles)

    st.caption(f"Cover: {report.describe()}")

    st.markdown("---")

    col1, col2 = st.columns(2)

    with col1:
        st.plotly_chart(create_sphere_chart(cfg, "Spheres"), use_container_width=True)
        st.dataframe(config_frame(cfg), use_container_width=True, hide_index=True)

    with col2:
        c = fukaya(cfg)
        st.plotly_chart(create_hom_heatmap(hom_matrix(c), "Floer groups"), use_container_width=True)

    st.markdown("---")

    st.subheader("🔺 Exact triangle of a twist")

    if len(cfg) >= 3:
        triangle = cone_triangle_check(*cfg.spheres[:3])
        st.write(f"Cone: {triangle.cone_dims}, HF(L1, tau L2): {triangle.target_dims}")
        verdicts = create_verdict_table({'graded dimensions': triangle.graded_match,
                                         'chain map bijective': triangle.bijective})
        st.dataframe(style_verdicts(verdicts), use_container_width=True, hide_index=True)
    else:
        st.caption("The triangle check needs three spheres.")

    fibre = st.slider("Sweep fibre size", min_value=2, max_value=4, value=3)
    if st.button("Sweep all triples"):
        with st.spinner("Checking every triple..."):
            checked, failures = triangle_sweep(fibre, (0,))
        if failures:
            st.error(f"{len(failures)} of {checked} triples fail")
        else:
            st.success(f"All {checked} triples satisfy the triangle")

    st.markdown("---")

    st.subheader("🔀 Hurwitz orbit")

    col1, col2 = st.columns(2)

    with col1:
        target_name = st.selectbox("Target configuration", list_fixtures(".zconf"))
        depth = st.slider("Maximal depth", min_value=1, max_value=6, value=3)
        graded = st.checkbox("Respect gradings", value=True)

    with col2:
        if st.button("Search"):
            target = parse_file(fixture_path(target_name))
            with st.spinner("Searching the orbit..."):
                result = orbit_search(cfg, target, depth, graded=graded)
            st.metric("Classes visited", result.visited)
            if result.found:
                path = "; ".join(result.path) or "(already equal)"
                st.success(f"Reached by: {path}")
            else:
                st.warning(f"Not reached within depth {result.depth_reached}")

    st.markdown('<a href="#top">⬆ Back to top</a>', unsafe_allow_html=True)

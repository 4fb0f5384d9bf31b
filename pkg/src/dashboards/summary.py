import streamlit as st

from utils import list_fixtures


def show():

    st.header("GF(2) A-infinity Workbench")
    st.write("Directed A-infinity categories, mutations and Hochschild cohomology, computed exactly over GF(2)")

    # Fixture counts
    col1, col2, col3, col4 = st.columns(4)

    col1.metric("Quivers", len(list_fixtures('.qcat')))
    col2.metric("Configurations", len(list_fixtures('.zconf')))
    col3.metric("Flow Data", len(list_fixtures('.flow')))
    col4.metric("Twisted Complexes", len(list_fixtures('.tw')))

    st.markdown("---")

    st.subheader("📋 Overview")

    st.markdown("""
    A directed A-infinity category is an ordered collection of objects with morphisms only going forward.
    Twisted complexes over it form a triangulated envelope in which cones, twists and mutations can be computed.
    Everything here is linear algebra over the field with two elements, so every answer is exact.

    The pages on the left cover three sources of such categories:

    - Quivers with relations, read from .qcat files
    - Configurations of zero-dimensional spheres in a fibre of n points (.zconf)
    - Combinatorial Morse flow data on a manifold (.flow)
    """)

    st.markdown("---")

    st.subheader("🔧 What each page computes")

    col1, col2 = st.columns(2)

    with col1:
        st.markdown("""
        **Categories:**
        - Hom tables and the A-infinity relations
        - Hochschild cohomology and its length filtration
        - Mutation scripts with HH invariance

        **Zero-dimensional:**
        - Directed Fukaya category of a configuration
        - Topology of the branched double cover
        - Exact triangle of a Dehn twist
        """)

    with col2:
        st.markdown("""
        **Morse:**
        - Morse category and its degree table
        - Endomorphisms of the fundamental object
        - Verdier pairing and the cellular HH check

        **Technologies Used:**
        - **Plotly**: Interactive heatmaps and charts
        - **Matplotlib / Seaborn**: Static degree tables
        - **Streamlit**: Dashboard framework
        """)

    st.markdown("---")

    st.subheader("⚠️ Limitations")

    st.info("""
    - Coefficients are GF(2) only
    - Isomorphism search is bounded and may answer 'unknown'
    - The dense Hochschild oracle refuses large cochain spaces
    - Cellular Morse checks handle one-dimensional interiors only
    """)

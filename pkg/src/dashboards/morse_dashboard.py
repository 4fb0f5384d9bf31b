import streamlit as st
import matplotlib.pyplot as plt
import seaborn as sns

from components import create_degree_bar, create_verdict_table, style_verdicts
from morse import degree_table, fundamental_endos, summary, verdier_check
from reports import morse_degree_frame
from utils import WorkbenchError


def show(f, name):
    st.markdown('<div id="top"></div>', unsafe_allow_html=True)

    st.header(f"⛰️ Morse flow data: {name}")

    st.info("""
    **How to read this page:**
    - Rows are pairs of critical points, columns are Hom degrees
    - The fundamental object should have the cohomology of the manifold as endomorphisms
    - On a closed manifold every critical point pairs nondegenerately with it
    """)

    st.caption(summary(f))

    st.markdown("---")

    col1, col2 = st.columns(2)

    with col1:
        st.caption("Hom dimensions by degree")

        pivot = morse_degree_frame(degree_table(f))
        if pivot.empty:
            st.warning("No trajectories between critical points")
        else:
            fig, ax = plt.subplots(figsize=(6, max(3, 0.6 * len(pivot.index))))
            sns.heatmap(pivot, annot=True, fmt='d', cmap='Blues', cbar=False, linewidths=0.5, ax=ax)
            ax.set_xlabel("Degree", fontsize=11)
            ax.set_ylabel("")
            ax.set_title("Morse category", fontsize=12, fontweight='bold')
            plt.tight_layout()
            st.pyplot(fig)

    with col2:
        try:
            endos = fundamental_endos(f, {})
        except WorkbenchError as exc:
            st.error(f"Fundamental object: {exc}")
        else:
            st.plotly_chart(create_degree_bar(endos.computed, "End of the fundamental object"),
                            use_container_width=True)
            if not endos.in_range:
                st.warning(f"Degrees outside 0..{f.dimension + 1}")

    st.markdown("---")

    st.subheader("🔍 Verdier pairing")

    if f.closed:
        with st.spinner("Checking pairings..."):
            verdicts = {x.name: verdier_check(f, x.name) for x in f.ordered_points()}
        st.dataframe(style_verdicts(create_verdict_table(verdicts)), use_container_width=True, hide_index=True)
    else:
        st.caption("Only defined for closed manifolds.")

    st.markdown('<a href="#top">⬆ Back to top</a>', unsafe_allow_html=True)

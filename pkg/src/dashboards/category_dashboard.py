import streamlit as st

from ainfty import check_relations
from components import (create_degree_bar, create_e1_heatmap, create_hom_heatmap, create_verdict_table,
                        get_category_kpis, style_verdicts)
from hochschild import cc_dims, e1_length, hh
from mutation import MutationScript, run_script
from reports import e1_frame, euler_form, hom_frame, hom_matrix
from utils import WorkbenchError


def show(c, name):
    st.markdown('<div id="top"></div>', unsafe_allow_html=True)

    st.header(f"🧮 Category: {name}")

    st.info("""
    **How to read this page:**
    - 🟦 The heatmap counts morphisms from each row object to each column object
    - 📊 Bars show Hochschild cohomology by degree
    - 🔁 Mutation scripts replace the objects and must leave HH unchanged
    """)

    # key metrics
    cols = st.columns(4)
    for col, kpi in zip(cols, get_category_kpis(c)):
        col.metric(kpi['label'], kpi['value'])

    relations = check_relations(c)
    if relations.ok:
        st.success("A-infinity relations hold")
    else:
        st.error(f"A-infinity relations fail: {relations.violation.describe(c)}")
        return

    st.markdown("---")

    st.subheader("📍 Morphisms")

    col1, col2 = st.columns([1.5, 1])

    with col1:
        view = st.radio("Show", ["Total dimension", "Euler characteristic"], horizontal=True)
        frame = hom_matrix(c) if view == "Total dimension" else euler_form(c)
        st.plotly_chart(create_hom_heatmap(frame, view), use_container_width=True)

    with col2:
        st.caption("Cohomological Hom by degree")
        st.dataframe(hom_frame(c), use_container_width=True, hide_index=True)

    st.markdown("---")

    st.subheader("🔍 Hochschild cohomology")

    col1, col2 = st.columns(2)

    with col1:
        with st.spinner("Computing HH..."):
            table = hh(c)
        st.plotly_chart(create_degree_bar(table, "HH by degree"), use_container_width=True)
        st.caption(f"Cochains by degree: {cc_dims(c)}")

    with col2:
        st.plotly_chart(create_e1_heatmap(e1_frame(e1_length(c)), "Length filtration, first page"),
                        use_container_width=True)

    st.markdown("---")

    st.subheader("🔁 Mutations")

    script_text = st.text_input("Script", value="c", help="Steps such as 'c; r; c!; shift 0,1,0'")

    if st.button("Run script"):
        try:
            script = MutationScript.parse(script_text)
            with st.spinner("Mutating..."):
                new = run_script(c, script)
                after = hh(new)
        except WorkbenchError as exc:
            st.error(str(exc))
        else:
            st.write(f"**Objects:** {', '.join(new.names)}")
            st.dataframe(hom_frame(new), use_container_width=True, hide_index=True)
            verdicts = create_verdict_table({'relations': check_relations(new).ok, 'HH invariant': after == table})
            st.dataframe(style_verdicts(verdicts), use_container_width=True, hide_index=True)

    st.markdown('<a href="#top">⬆ Back to top</a>', unsafe_allow_html=True)

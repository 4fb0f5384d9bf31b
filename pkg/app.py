"""
GF(2) A-infinity Workbench
Main navigation file

Libraries: Streamlit, Plotly, Matplotlib, Seaborn
"""

import streamlit as st
import sys
import os

# Add src folder to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# Import dashboard pages
from dashboards import summary, category_dashboard, zerodim_dashboard, morse_dashboard
from formats import load_category, parse_file
from utils import WorkbenchError, fixture_path, list_fixtures

PAGES = ["Summary", "Categories", "Zero-dimensional", "Morse"]

# Page setup
st.set_page_config(
    page_title="GF(2) Workbench",
    page_icon="🧮",
    layout="wide"
)


@st.cache_data
def load_fixture(name):
    """Parse one fixture; categories are built from quivers, configurations and flows alike."""
    if name.endswith('.qcat'):
        return load_category(fixture_path(name))
    return parse_file(fixture_path(name))


# Initialize session state for active tab
if 'active_tab' not in st.session_state:
    st.session_state.active_tab = 0

# Sidebar
with st.sidebar:
    st.title("🧮 GF(2) Workbench")
    st.markdown("---")

    st.subheader("🧭 Quick Navigation")

    # Navigation buttons - update session state and rerun
    for n, page in enumerate(PAGES):
        if st.button(page, use_container_width=True,
                     type="primary" if st.session_state.active_tab == n else "secondary"):
            st.session_state.active_tab = n
            st.rerun()

    st.markdown("---")

    st.subheader("📂 Input")

    suffix = {1: '.qcat', 2: '.zconf', 3: '.flow'}.get(st.session_state.active_tab)
    selected = None
    if suffix:
        options = list_fixtures(suffix)
        if options:
            selected = st.selectbox("Fixture", options)
        else:
            st.caption(f"No {suffix} fixtures found")

    if st.button("Clear Cache", use_container_width=True):
        st.cache_data.clear()
        st.rerun()

    st.markdown("---")

    st.subheader("ℹ️ About")
    st.markdown("""
    **Coefficients:**
    GF(2)

    **Command line:**
    `python3 workbench.py --help`
    """)

# Display the active dashboard directly (no tabs UI conflict)
st.markdown("---")

if st.session_state.active_tab == 0:
    summary.show()
elif selected is None:
    st.warning("Select a fixture in the sidebar.")
else:
    try:
        with st.spinner(f"Loading {selected}..."):
            value = load_fixture(selected)
    except WorkbenchError as exc:
        st.error(f"❌ {selected}: {exc}")
        st.stop()

    if st.session_state.active_tab == 1:
        category_dashboard.show(value, selected)
    elif st.session_state.active_tab == 2:
        zerodim_dashboard.show(value, selected)
    elif st.session_state.active_tab == 3:
        morse_dashboard.show(value, selected)

# Footer
st.markdown("---")
st.markdown("""
<div style='text-align: center; color: gray; font-size: 12px;'>
    GF(2) A-infinity Workbench<br>
    Exact computations over the field with two elements
</div>
""", unsafe_allow_html=True)

#streamlit pages

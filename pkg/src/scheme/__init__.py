# Scheme module

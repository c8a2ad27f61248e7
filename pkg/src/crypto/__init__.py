# Pairing core module

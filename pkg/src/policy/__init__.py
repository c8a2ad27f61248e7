# Policy module

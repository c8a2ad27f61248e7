# Game module

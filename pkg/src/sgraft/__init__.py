"""Node-replacement graph grammars for string-graph families and their rewriting."""

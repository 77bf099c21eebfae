# examples/ is a read-only reference corpus, not part of the test suite
collect_ignore_glob = ["examples/*"]

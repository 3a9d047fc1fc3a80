"""Package marker for duffing_atlas.oracle."""

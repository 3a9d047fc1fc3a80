"""Package marker for duffing_atlas.render."""

"""Long-running acceptance checks of the walk against its known physical results."""

# Test suite for the microgrid EMS simulator.

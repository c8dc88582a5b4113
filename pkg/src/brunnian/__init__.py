"""Exact verification of the Brunnian conjecture construction over prime fields."""

"""q-adic Takagi toolkit: exact measures, generalized Takagi functions and their derivative identities."""

"""Environment-carrying unification, derived and checked by deductive synthesis."""

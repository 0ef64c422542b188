from hypothesis import settings

# fixed example generation unless --hypothesis-seed is given
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40)
settings.load_profile("repro")

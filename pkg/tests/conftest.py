import hypothesis

# Property tests share one profile: no per-example deadline (the first call
# into scipy or mpmath can be slow) and a modest example budget, since every
# strategy here drives real numerics rather than data shuffling.
hypothesis.settings.register_profile(
    "tailbound",
    deadline=None,
    max_examples=75,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("tailbound")

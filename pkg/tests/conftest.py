from hypothesis import HealthCheck, settings

# Exact arithmetic means a slow example is just a big fraction, not a bug;
# the per-example deadline only adds noise on a loaded machine.
settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")

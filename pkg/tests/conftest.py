from hypothesis import settings

settings.register_profile("cbspair", deadline=None)
settings.load_profile("cbspair")

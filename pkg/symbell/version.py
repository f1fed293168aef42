"""Release number of symbell; read by setup.py and written into inequality files."""
major = 0
minor = 3
release = 0

version = '{}.{}.{}'.format(major, minor, release)

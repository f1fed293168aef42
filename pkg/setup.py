#!/usr/bin/env python
# Licensed under an MIT style license - see LICENSE.txt

from configparser import ConfigParser

from setuptools import setup

# Get some values from the setup.cfg
conf = ConfigParser()
conf.read(['setup.cfg'])
metadata = dict(conf.items('metadata'))

AUTHOR = metadata.get('author', '')
AUTHOR_EMAIL = metadata.get('author_email', '')
DESCRIPTION = metadata.get('description', '')
KEYWORDS = metadata.get('keywords', 'Bell inequalities')
LICENSE = metadata.get('license', 'unknown')
LONG_DESCRIPTION = metadata.get('long_description', '')
PACKAGENAME = metadata.get('package_name', 'symbell')
URL = metadata.get('url', '')

# symbell/version.py is the single source of the version number
version = {}
with open('symbell/version.py') as f:
    exec(f.read(), version)

setup(name=PACKAGENAME,
      version=version['version'],
      description=DESCRIPTION,
      long_description=LONG_DESCRIPTION,
      author=AUTHOR,
      author_email=AUTHOR_EMAIL,
      license=LICENSE,
      url=URL,
      keywords=KEYWORDS,
      packages=['symbell'],
      package_data={'symbell': ['data/*.txt']},
      python_requires='>=3.9',
      install_requires=['numpy>=1.20', 'scipy>=1.7', 'sympy>=1.9', 'joblib>=1.0', 'tqdm', 'matplotlib'],
      setup_requires=['pytest-runner'],
      tests_require=['pytest', 'pytest-cov'],
      entry_points={'console_scripts': ['symbell = symbell.cli:main']},
      classifiers=[
          'Development Status :: 3 - Alpha',
          'Environment :: Console',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: MIT License',
          'Operating System :: POSIX',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3 :: Only',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Scientific/Engineering :: Physics',
      ],
      )

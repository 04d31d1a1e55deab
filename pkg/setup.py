"""
Setup script for GAN Oversampler
"""

from setuptools import setup, find_packages

with open('README.md', 'r', encoding='utf-8') as f:
    long_description = f.read()

with open('requirements.txt', 'r', encoding='utf-8') as f:
    requirements = [line.split('#')[0].strip() for line in f if line.strip() and not line.startswith('#')]

setup(
    name='gan-oversampler',
    version='1.0.0',
    description='Per-class GAN oversampling of minority classes in tabular data, with an evaluation pipeline',
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='GAN Oversampler Team',
    python_requires='>=3.9',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    py_modules=['oversampler'],
    include_package_data=True,
    install_requires=requirements,
    entry_points={
        'console_scripts': [
            'gan-oversampler=oversampler:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
)

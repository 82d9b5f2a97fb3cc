from setuptools import setup, find_packages

setup(
    name='pyrepsim',
    version='0.1.0',
    description='Similarity indexes for comparing neural network representations',
    license='BSD 3-Clause License',
    classifiers=['Development Status :: 4 - Beta'],
    packages=find_packages(exclude=['test']),
    python_requires='>=3.6',
    install_requires=['numpy', 'scipy'],
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['repsim=pyrepsim.cli:main']},
    keywords=['python', 'representational similarity', 'CKA', 'CCA', 'neural networks'],
)

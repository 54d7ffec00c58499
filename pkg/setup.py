from setuptools import find_packages, setup

with open('requirements.txt', encoding='utf-8') as f:
    requirements = [line.strip() for line in f if line.strip()]

setup(
    name='paradox-lab',
    version='0.1.0',
    description='Verification lab for set-theoretic paradoxes and the productivity principle',
    packages=find_packages(include=['engines', 'commands']),
    py_modules=['main'],
    install_requires=requirements,
    extras_require={'dev': ['pytest>=7.4', 'hypothesis>=6.82']},
    python_requires='>=3.9',
    entry_points={'console_scripts': ['paradox-lab=main:main']},
)

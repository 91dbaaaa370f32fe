from os import path
from setuptools import setup, find_packages

_THIS_DIR = path.dirname(__file__)


def main():
    version_path = path.join(_THIS_DIR, 'dtdgraph', 'VERSION')
    with open(version_path) as f:
        package_version = f.read().strip()

    readme_path = path.join(_THIS_DIR, 'README.rst')
    with open(readme_path, encoding='utf8') as f:
        long_description = f.read()

    requirements_path = path.join(_THIS_DIR, 'requirements.txt')
    with open(requirements_path) as f:
        requirements = [x.strip() for x in f.readlines() if x.strip()]

    setup(
        name='dtdgraph',
        version=package_version,
        description='Draw XML DTDs as schema graphs in a Crow\'s-Foot '
                    'notation (DOT and JSON output)',
        long_description=long_description,
        license='MIT License',
        packages=find_packages(),
        python_requires='>=3.7',
        keywords=[
            'XML', 'DTD', 'schema', 'visualization', 'graphviz', 'DOT',
            'crow\'s foot', 'data modeling'],

        install_requires=requirements,

        package_data={
          'dtdgraph': [
              'VERSION',
              'schema/*.json',
              'datasets/*',
              'tests/data/*',
              'tests/data/golden/*',
          ],
        },

        zip_safe=False,

        entry_points={
          'console_scripts': [
              'dtdgraph = dtdgraph.__main__:main',
              'dtdgraph-verify = dtdgraph.cli:verify_main',
          ]
        },

        classifiers=[
          'Development Status :: 3 - Alpha',
          'Intended Audience :: Developers',
          'Intended Audience :: Education',
          'Intended Audience :: Information Technology',
          'License :: OSI Approved :: MIT License',
          'Operating System :: OS Independent',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3 :: Only',
          'Topic :: Documentation',
          'Topic :: Software Development :: Documentation',
          'Topic :: Text Processing :: Markup :: XML',
          'Topic :: Scientific/Engineering :: Visualization',
          ],
    )


if __name__ == '__main__':
    main()

"""Link-weight optimisation for shortest-path load balancing.

A genetic algorithm evolves integer link weights so that shortest-path
routing of a demand set minimises the most loaded link.
"""

__version__ = "0.1.0"

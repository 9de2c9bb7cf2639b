"""icon: a three-tier workbench that builds domain ontologies from text corpora.

The package is split along the tier boundaries of the system:

* data tier        -- :mod:`icon.library` (segmented key-value store + wire protocol)
* logic tier       -- :mod:`icon.corpus`, :mod:`icon.index`, :mod:`icon.analysis`,
                      :mod:`icon.ontology`, :mod:`icon.server`
* presentation     -- :mod:`icon.cli` (thin terminal client; the web editor lives
                      in the separate ``frontend/`` package)

:mod:`icon.manifest` holds the component registry and the integrity predicate
that every service checks at startup.
"""

__version__ = "0.1.0"

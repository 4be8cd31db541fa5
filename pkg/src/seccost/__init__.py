"""Quantify the cost of securing O-RAN open interfaces.

Submodules:

* ``overhead``    byte-exact ESP / MACsec / TLS frame expansion
* ``delaymodel``  queuing/propagation/transmission/processing decomposition
* ``perfmodel``   cipher throughput caps, CPU and load-latency models
* ``mtu``         payload fragmentation and MTU selection
* ``feasibility`` WG4 fronthaul delay budget classification
* ``traceio``     pcap parsing, traffic classification and projection
"""

__version__ = "0.1.0"

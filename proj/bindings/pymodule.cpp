#include <pybind11/pybind11.h>

PYBIND11_MODULE(_hbsdr, m) { m.doc() = "hierarchical spline complex toolkit"; }

#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_soergel_trace, m) {
  m.doc() = "Soergel bimodule calculus and derived annular traces";
}

#include "ctrabs/vocab.hpp"

namespace ctrabs::logic {

int Vocab::sort_index(const std::string& n) const {
  for (size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == n) return (int)i;
  return -1;
}

int Vocab::array_index(const std::string& n) const {
  for (size_t i = 0; i < arrays.size(); ++i)
    if (arrays[i].name == n) return (int)i;
  return -1;
}

int Vocab::counter_index(const std::string& n) const {
  for (size_t i = 0; i < counters.size(); ++i)
    if (counters[i].name == n) return (int)i;
  return -1;
}

int Vocab::param_index(const std::string& n) const {
  for (size_t i = 0; i < params.size(); ++i)
    if (params[i] == n) return (int)i;
  return -1;
}

int Vocab::intvar_index(const std::string& n) const {
  for (size_t i = 0; i < intvars.size(); ++i)
    if (intvars[i].name == n) return (int)i;
  return -1;
}

int Vocab::value_index(int sortIdx, const std::string& v) const {
  const auto& vs = sorts.at(sortIdx).values;
  for (size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == v) return (int)i;
  return -1;
}

bool Vocab::name_taken(const std::string& n) const {
  if (param_index(n) >= 0 || intvar_index(n) >= 0 || array_index(n) >= 0 ||
      counter_index(n) >= 0 || sort_index(n) >= 0)
    return true;
  for (const auto& s : sorts)
    for (const auto& v : s.values)
      if (v == n) return true;
  return false;
}

const std::string& Vocab::array_sort_value(int arrayIdx, int valIdx) const {
  return sorts.at(arrays.at(arrayIdx).sortIdx).values.at(valIdx);
}

} // namespace ctrabs::logic

#pragma once

#include <string>

namespace acme {

class Widget {
 public:
  explicit Widget(std::string label) : label_(std::move(label)) {}
  const std::string& label() const { return label_; }
  int area(int w, int h) const;

 private:
  std::string label_;
};

}  // namespace acme

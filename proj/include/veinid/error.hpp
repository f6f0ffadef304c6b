#pragma once

#include <stdexcept>
#include <string>

namespace veinid {

// Base of every failure the library reports. Callers that only need a
// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or malformed input (CLI exit 2).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ImageTooSmall : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class FormatError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

// The data itself cannot support the requested operation (CLI exit 3).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class DegenerateImage : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class EmptyROI : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class NoFeatures : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class DegenerateTemplate : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class EmptyProbe : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

class InsufficientData : public DegenerateData {
 public:
  using DegenerateData::DegenerateData;
};

}  // namespace veinid

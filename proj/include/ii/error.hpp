#pragma once

#include <stdexcept>
#include <string>

namespace ii {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSeries : public Error { public: using Error::Error; };
class FormatError : public Error { public: using Error::Error; };
class MissingFileError : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };
class StratifyError : public Error { public: using Error::Error; };
class ChannelCountError : public Error { public: using Error::Error; };
class BinCountError : public Error { public: using Error::Error; };
class ShapeError : public Error { public: using Error::Error; };
class AlignmentError : public Error { public: using Error::Error; };
class SingularCovariance : public Error { public: using Error::Error; };
class ClassCountError : public Error { public: using Error::Error; };

// Bad CLI arguments or config files. Maps to exit code 2 in the tool.
class ConfigError : public Error { public: using Error::Error; };

// Filesystem trouble that is not a format problem (unwritable path, short write).
class IoError : public Error { public: using Error::Error; };

using InvalidShape = ShapeError;

}  // namespace ii

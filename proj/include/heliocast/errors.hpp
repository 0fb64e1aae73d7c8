#pragma once

#include <stdexcept>
#include <string>

namespace helio {

// Broad failure categories; tools/main maps these to process exit codes.
enum class ErrorCategory {
    config = 2,
    artifact = 3,
    data = 4,
    model = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& msg)
        : std::runtime_error(msg), category_(category) {}
    ErrorCategory category() const { return category_; }

  private:
    ErrorCategory category_;
};

#define HELIO_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                              \
      public:                                                                \
        explicit Name(const std::string& msg)                                \
            : Error(ErrorCategory::Category, std::string(#Name ": ") + msg) {}\
    }

// geo
HELIO_DEFINE_ERROR(DuplicateCoordinates, data);
HELIO_DEFINE_ERROR(DisconnectedAfterPrune, data);

// sampling / walks / embedding
HELIO_DEFINE_ERROR(EmptyWeights, data);
HELIO_DEFINE_ERROR(NonPositiveWeight, data);
HELIO_DEFINE_ERROR(EmptyWalks, data);
HELIO_DEFINE_ERROR(NodeIdOutOfRange, data);

// features
HELIO_DEFINE_ERROR(InvalidTimestamp, data);
HELIO_DEFINE_ERROR(SchemaMismatch, data);
HELIO_DEFINE_ERROR(UnknownLocation, data);
HELIO_DEFINE_ERROR(MissingEmbedding, artifact);

// dataset
HELIO_DEFINE_ERROR(MalformedHeader, data);
HELIO_DEFINE_ERROR(UnparseableRow, data);
HELIO_DEFINE_ERROR(EmptyFile, data);
HELIO_DEFINE_ERROR(NoForecastData, data);
HELIO_DEFINE_ERROR(EmptySplit, data);
HELIO_DEFINE_ERROR(ParameterOutOfRange, config);
HELIO_DEFINE_ERROR(NegativeInput, data);
HELIO_DEFINE_ERROR(EfficiencyAboveOne, data);

// models
HELIO_DEFINE_ERROR(EmptyTrainingSet, data);
HELIO_DEFINE_ERROR(SingularSystem, model);
HELIO_DEFINE_ERROR(UnfittedModel, model);

// eval
HELIO_DEFINE_ERROR(LengthMismatch, data);

// synth / cli
HELIO_DEFINE_ERROR(ConfigInvalid, config);
HELIO_DEFINE_ERROR(ConfigError, config);
HELIO_DEFINE_ERROR(MissingArtifact, artifact);

#undef HELIO_DEFINE_ERROR

}  // namespace helio

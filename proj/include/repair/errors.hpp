#pragma once

#include <stdexcept>
#include <string>

namespace repair {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define REPAIR_ERROR(Name)                    \
    struct Name : Error {                     \
        using Error::Error;                   \
        Name() : Error(#Name) {}              \
    }

// data-model
REPAIR_ERROR(InvalidLabel);
REPAIR_ERROR(NonFiniteScore);
REPAIR_ERROR(AsymmetricSimilarity);
REPAIR_ERROR(SparseTooShort);
// shortlist
REPAIR_ERROR(ShortlistTooLarge);
REPAIR_ERROR(EmptyInput);
// features
REPAIR_ERROR(NotInShortlist);
REPAIR_ERROR(SamePair);
REPAIR_ERROR(SimilarityRequired);
REPAIR_ERROR(DivisionByZero);
// model
REPAIR_ERROR(SingletonShortlist);
REPAIR_ERROR(DimensionMismatch);
REPAIR_ERROR(UncoveredExample);
REPAIR_ERROR(EmptyCalibration);
REPAIR_ERROR(OptimizerDiverged);
// shrinkage
REPAIR_ERROR(EmptyGroup);
REPAIR_ERROR(NonPositiveVariance);
// baselines
REPAIR_ERROR(ZeroPrior);
REPAIR_ERROR(MissingWeightNorms);
REPAIR_ERROR(NonPositiveNorm);
REPAIR_ERROR(EmptyGrid);
// metrics
REPAIR_ERROR(Uncovered);
REPAIR_ERROR(NoCoveredExamples);
REPAIR_ERROR(SaturatedBase);
// diagnostics
REPAIR_ERROR(InsufficientContexts);
REPAIR_ERROR(TooFewClasses);
REPAIR_ERROR(NoGenerativeTruth);
// synthgen
REPAIR_ERROR(InvalidSpec);
// io
REPAIR_ERROR(ParseError);
REPAIR_ERROR(HeaderMismatch);
REPAIR_ERROR(VersionMismatch);

#undef REPAIR_ERROR

}  // namespace repair

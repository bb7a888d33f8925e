# Business logic tests package

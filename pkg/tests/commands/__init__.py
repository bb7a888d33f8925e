# Command tests package

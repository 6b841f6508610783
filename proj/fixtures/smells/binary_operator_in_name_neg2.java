public int operandCount(String expression) {
    return measure(expression);
}

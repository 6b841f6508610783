public double priceOrder(int quantity, double unitPrice, double taxRate, long customerId, boolean expedited) {
    return quote(quantity, unitPrice, taxRate, customerId, expedited);
}
